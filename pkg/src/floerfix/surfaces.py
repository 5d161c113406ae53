"""
Mod 2 homology of compact orientable surfaces relative to some boundary circles.

``rel_betti`` is the closed form; ``simplicial_oracle`` triangulates the
surface and computes the same numbers from chains, for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .f2_linalg import SparseBoolMatrix, rank

ORACLE_MAX_GENUS = 3
ORACLE_MAX_BOUNDARY = 4


@dataclass(frozen=True)
class SurfacePiece:
    """A connected surface of the given genus with boundary circles.

    The first ``collapsed_circles`` boundary circles form the relative
    subset. Punctures behave as extra boundary circles that are never in it.
    """

    genus: int
    boundary_circles: int = 0
    collapsed_circles: int = 0
    punctures: int = 0

    def __post_init__(self):
        if min(self.genus, self.boundary_circles, self.collapsed_circles, self.punctures) < 0:
            raise ValueError("surface counts must be nonnegative")
        if self.collapsed_circles > self.boundary_circles:
            raise ValueError(
                f"cannot collapse {self.collapsed_circles} of {self.boundary_circles} boundary circles"
            )

    @property
    def holes(self) -> int:
        return self.boundary_circles + self.punctures

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.holes


def rel_betti(s: SurfacePiece) -> tuple[int, int, int]:
    """Ranks of H_0, H_1, H_2 of the surface relative to its collapsed circles."""
    g, b, c = s.genus, s.holes, s.collapsed_circles
    if c == 0:
        if b == 0:
            return 1, 2 * g, 1
        return 1, 2 * g + b - 1, 0
    if c < b:
        return 0, 2 * g + b - 2, 0
    return 0, 2 * g + b - 1, 1


def _polygon_word(genus: int, holes: int) -> list[tuple[str, int]]:
    # letters with exponent +-1; "d*" letters are free boundary edges
    word: list[tuple[str, int]] = []
    for i in range(genus):
        word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
    for k in range(holes):
        word += [(f"e{k}", 1), (f"d{k}", 1), (f"e{k}", -1)]
    if not word:
        word = [("s", 1), ("s", -1)]
    return word


def triangulate(genus: int, holes: int) -> tuple[list[tuple[int, ...]], list[list[int]]]:
    """Triangles of a simplicial surface plus the vertex cycle of each boundary circle.

    The polygon of the standard surface word is used: every side is cut in
    three, an inner ring of fresh vertices is added, and everything is coned
    to a centre. Vertices on the polygon are identified along paired sides.
    """
    word = _polygon_word(genus, holes)
    corners = len(word)
    m = 3 * corners
    # polygon boundary positions 0..m-1; position 3k is the corner starting side k
    parent = list(range(m))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u, v):
        parent[find(u)] = find(v)

    def side_points(k):
        # positions along side k in the letter's own direction
        pts = [3 * k, 3 * k + 1, 3 * k + 2, (3 * k + 3) % m]
        return pts if word[k][1] == 1 else pts[::-1]

    seen: dict[str, int] = {}
    for k, (letter, _) in enumerate(word):
        if letter in seen:
            for u, v in zip(side_points(seen[letter]), side_points(k)):
                union(u, v)
        else:
            seen[letter] = k

    labels: dict[int, int] = {}
    vid = [0] * m
    for p in range(m):
        r = find(p)
        if r not in labels:
            labels[r] = len(labels)
        vid[p] = labels[r]
    nv = len(labels)
    ring = list(range(nv, nv + m))
    centre = nv + m

    tris = []
    for p in range(m):
        q = (p + 1) % m
        tris.append(tuple(sorted((vid[p], vid[q], ring[p]))))
        tris.append(tuple(sorted((vid[q], ring[p], ring[q]))))
        tris.append(tuple(sorted((ring[p], ring[q], centre))))

    circles = []
    for k, (letter, _) in enumerate(word):
        if letter.startswith("d"):
            circles.append([vid[3 * k], vid[3 * k + 1], vid[3 * k + 2]])
    return tris, circles


def simplicial_oracle(s: SurfacePiece) -> tuple[int, int, int]:
    """Relative mod 2 Betti numbers from an explicit triangulation."""
    if s.genus > ORACLE_MAX_GENUS or s.holes > ORACLE_MAX_BOUNDARY:
        raise ValueError(
            f"oracle supports genus <= {ORACLE_MAX_GENUS} and at most "
            f"{ORACLE_MAX_BOUNDARY} boundary circles plus punctures"
        )
    tris, circles = triangulate(s.genus, s.holes)
    if len(set(tris)) != len(tris) or any(len(set(t)) != 3 for t in tris):
        raise AssertionError("degenerate triangulation")

    edges = sorted({e for t in tris for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))})
    verts = sorted({v for t in tris for v in t})

    sub_v: set[int] = set()
    sub_e: set[tuple[int, int]] = set()
    for cyc in circles[: s.collapsed_circles]:
        sub_v.update(cyc)
        for i in range(3):
            sub_e.add(tuple(sorted((cyc[i], cyc[(i + 1) % 3]))))

    rel_v = [v for v in verts if v not in sub_v]
    rel_e = [e for e in edges if e not in sub_e]
    vpos = {v: i for i, v in enumerate(rel_v)}
    epos = {e: i for i, e in enumerate(rel_e)}

    d1 = []
    for j, (u, v) in enumerate(rel_e):
        d1 += [(vpos[w], j) for w in (u, v) if w in vpos]
    d2 = []
    for j, (a, b, c) in enumerate(tris):
        d2 += [(epos[e], j) for e in ((a, b), (a, c), (b, c)) if e in epos]
    r1 = rank(SparseBoolMatrix.from_entries(len(rel_v), len(rel_e), d1))
    r2 = rank(SparseBoolMatrix.from_entries(len(rel_e), len(tris), d2))
    return len(rel_v) - r1, len(rel_e) - r1 - r2, len(tris) - r2
