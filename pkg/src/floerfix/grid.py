"""
Knot Floer homology of knots in S^3 from grid diagrams.

A grid of size n carries one X and one O in every row and column. The
generators of the grid complex are the n! permutations; generator ``x`` puts
a point at lattice position ``(i, x[i])`` for each column line ``i``. The
"tilde" complex counts empty rectangles avoiding every X and O, and its
homology is the hat knot Floer homology tensored with n-1 copies of a
two-dimensional space supported in bidegrees (0, 0) and (-1, -1).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numba
import numpy as np

from .f2_linalg import GradedComplex, SparseBoolMatrix, homology_ranks

DEFAULT_MAX_GRID = 10


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridDiagram:
    """Marks are indexed by row: ``x_marks[r]`` is the column of the X in row r."""

    x_marks: tuple[int, ...]
    o_marks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x_marks", tuple(int(v) for v in self.x_marks))
        object.__setattr__(self, "o_marks", tuple(int(v) for v in self.o_marks))
        n = len(self.x_marks)
        if n < 2:
            raise GridError("grid size must be at least 2")
        if len(self.o_marks) != n:
            raise GridError("x_marks and o_marks differ in length")
        for name, marks in (("x_marks", self.x_marks), ("o_marks", self.o_marks)):
            if sorted(marks) != list(range(n)):
                raise GridError(f"{name} is not a permutation of 0..{n - 1}")
        for r in range(n):
            if self.x_marks[r] == self.o_marks[r]:
                raise GridError(f"row {r} has its X and O in the same cell")
        if self.components() != 1:
            raise GridError(f"diagram encodes a {self.components()}-component link, not a knot")

    @property
    def n(self) -> int:
        return len(self.x_marks)

    def components(self) -> int:
        n = self.n
        o_row_of_col = [0] * n
        for r, c in enumerate(self.o_marks):
            o_row_of_col[c] = r
        seen = [False] * n
        count = 0
        for start in range(n):
            if seen[start]:
                continue
            count += 1
            r = start
            while not seen[r]:
                seen[r] = True
                # X in row r -> O in the same column -> that O's row
                r = o_row_of_col[self.x_marks[r]]
        return count

    def transpose(self) -> "GridDiagram":
        """Reflect across the diagonal (rows become columns)."""
        n = self.n
        xt = [0] * n
        ot = [0] * n
        for r in range(n):
            xt[self.x_marks[r]] = r
            ot[self.o_marks[r]] = r
        return GridDiagram(tuple(xt), tuple(ot))

    def shift(self, dc: int = 0, dr: int = 0) -> "GridDiagram":
        """Cyclic translation on the torus; does not change the knot."""
        n = self.n
        x = [0] * n
        o = [0] * n
        for r in range(n):
            x[(r + dr) % n] = (self.x_marks[r] + dc) % n
            o[(r + dr) % n] = (self.o_marks[r] + dc) % n
        return GridDiagram(tuple(x), tuple(o))

    def swap_marks(self) -> "GridDiagram":
        """Exchange X and O (reverses the knot's orientation)."""
        return GridDiagram(self.o_marks, self.x_marks)

    def stabilize(self, row: int, on_x: bool = True, corner: int = 0) -> "GridDiagram":
        """Grid stabilization at the X (or O) of ``row``.

        The marked cell becomes a 2x2 block with an empty cell at ``corner``
        (bit 0: right, bit 1: top), the other mark type diagonally opposite
        it and two copies of the original mark type elsewhere.
        """
        n = self.n
        same, other = (self.x_marks, self.o_marks) if on_x else (self.o_marks, self.x_marks)
        c = same[row]
        dx, dy = corner & 1, (corner >> 1) & 1

        def colmap(k):
            if k == c:
                return c + dx
            return k if k < c else k + 1

        def rowmap(k):
            if k == row:
                return row + dy
            return k if k < row else k + 1

        new_same = [0] * (n + 1)
        new_other = [0] * (n + 1)
        for k in range(n):
            if k == row:
                continue
            new_same[rowmap(k)] = colmap(same[k])
            new_other[rowmap(k)] = colmap(other[k])
        new_same[row + dy] = c + 1 - dx
        new_other[row + dy] = colmap(other[row])
        new_same[row + 1 - dy] = c + dx
        new_other[row + 1 - dy] = c + 1 - dx
        if on_x:
            return GridDiagram(tuple(new_same), tuple(new_other))
        return GridDiagram(tuple(new_other), tuple(new_same))

    def mirror(self) -> "GridDiagram":
        """Reflect left-right; the result encodes the mirror knot."""
        n = self.n
        return GridDiagram(
            tuple(n - 1 - c for c in self.x_marks), tuple(n - 1 - c for c in self.o_marks)
        )

    @classmethod
    def torus_knot(cls, p: int, q: int) -> "GridDiagram":
        """Grid of size p+q for the torus knot T(p, q); needs gcd(p, q) = 1."""
        n = p + q
        return cls(tuple((r + q) % n for r in range(n)), tuple(range(n)))

    def to_text(self) -> str:
        return f"{self.n}\n{' '.join(map(str, self.x_marks))}\n{' '.join(map(str, self.o_marks))}\n"


def connected_sum(g1: GridDiagram, g2: GridDiagram) -> GridDiagram:
    """Grid of size n1 + n2 - 1 for the connected sum.

    ``g1`` is translated so an X sits in its top-right cell and ``g2`` so an
    O sits in its bottom-left cell; the two corners are overlapped and both
    marks deleted, which splices the two knots along one arc.
    """
    n1, n2 = g1.n, g2.n
    g1 = g1.shift(n1 - 1 - g1.x_marks[0], n1 - 1)
    g2 = g2.shift(-g2.o_marks[0], 0)
    n = n1 + n2 - 1
    x = [0] * n
    o = [0] * n
    for r in range(n1 - 1):
        x[r], o[r] = g1.x_marks[r], g1.o_marks[r]
    x[n1 - 1] = g2.x_marks[0] + n1 - 1
    o[n1 - 1] = g1.o_marks[n1 - 1]
    for r in range(1, n2):
        x[n1 - 1 + r] = g2.x_marks[r] + n1 - 1
        o[n1 - 1 + r] = g2.o_marks[r] + n1 - 1
    return GridDiagram(tuple(x), tuple(o))


def read_grid(text: str, *, max_grid: int | None = DEFAULT_MAX_GRID) -> GridDiagram:
    """Parse the three-line grid format; ``#`` lines and blank lines are skipped."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append((lineno, s))
    if len(lines) != 3:
        where = lines[3][0] if len(lines) > 3 else (lines[-1][0] if lines else 1)
        raise GridError(f"line {where}: expected exactly 3 data lines, found {len(lines)}")
    try:
        n = int(lines[0][1])
    except ValueError:
        raise GridError(f"line {lines[0][0]}: grid size is not an integer") from None
    rows = []
    for lineno, s in lines[1:]:
        try:
            vals = [int(t) for t in s.split()]
        except ValueError:
            raise GridError(f"line {lineno}: non-integer entry") from None
        if len(vals) != n:
            raise GridError(f"line {lineno}: expected {n} entries, found {len(vals)}")
        if sorted(vals) != list(range(n)):
            raise GridError(f"line {lineno}: not a permutation of 0..{n - 1}")
        rows.append(vals)
    if max_grid is not None and n > max_grid:
        raise GridError(f"grid size {n} exceeds the cap of {max_grid} (use --max-grid to override)")
    try:
        return GridDiagram(tuple(rows[0]), tuple(rows[1]))
    except GridError as exc:
        raise GridError(f"line {lines[1][0]}-{lines[2][0]}: {exc}") from None


# ---------------------------------------------------------------------------
# gradings


def _twice_j(p: list[tuple[float, float]], q: list[tuple[float, float]]) -> int:
    count = 0
    for a in p:
        for b in q:
            if a[0] < b[0] and a[1] < b[1]:
                count += 1
            if b[0] < a[0] and b[1] < a[1]:
                count += 1
    return count


def _maslov(points, marks) -> int:
    twice = _twice_j(points, points) - 2 * _twice_j(points, marks) + _twice_j(marks, marks)
    return twice // 2 + 1


def bigradings(g: GridDiagram, gen: Iterable[int]) -> tuple[int, int]:
    """(Maslov, Alexander) of the generator with points ``(i, gen[i])``."""
    gen = list(gen)
    n = g.n
    if sorted(gen) != list(range(n)):
        raise GridError("generator is not a permutation")
    pts = [(float(i), float(v)) for i, v in enumerate(gen)]
    os_ = [(c + 0.5, r + 0.5) for r, c in enumerate(g.o_marks)]
    xs_ = [(c + 0.5, r + 0.5) for r, c in enumerate(g.x_marks)]
    m_o = _maslov(pts, os_)
    m_x = _maslov(pts, xs_)
    num = m_o - m_x - (n - 1)
    if num % 2:
        raise GridError("non-integral Alexander grading; the diagram is not a knot")
    return m_o, num // 2


@numba.njit(cache=True)
def _all_permutations(n):
    total = 1
    for k in range(2, n + 1):
        total *= k
    out = np.empty((total, n), dtype=np.int8)
    a = np.arange(n).astype(np.int8)
    for t in range(total):
        out[t] = a
        # next lexicographic permutation
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            break
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        tmp = a[i]
        a[i] = a[j]
        a[j] = tmp
        lo, hi = i + 1, n - 1
        while lo < hi:
            tmp = a[lo]
            a[lo] = a[hi]
            a[hi] = tmp
            lo += 1
            hi -= 1
    return out


@numba.njit(cache=True)
def _twice_j_gen_marks(perm, mark_cols, n):
    # points at doubled coords (2i, 2perm[i]); marks at (2c+1, 2r+1)
    count = 0
    for i in range(n):
        for r in range(n):
            c = mark_cols[r]
            if (i <= c and perm[i] <= r) or (i > c and perm[i] > r):
                count += 1
    return count


@numba.njit(cache=True)
def _grade_all(perms, x_marks, o_marks):
    n = perms.shape[1]
    twice_oo = 0
    twice_xx = 0
    for r in range(n):
        for s in range(n):
            if o_marks[r] < o_marks[s] and r < s:
                twice_oo += 2
            if x_marks[r] < x_marks[s] and r < s:
                twice_xx += 2
    mas = np.empty(perms.shape[0], dtype=np.int64)
    alex = np.empty(perms.shape[0], dtype=np.int64)
    for t in range(perms.shape[0]):
        p = perms[t]
        twice_pp = 0
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] < p[j]:
                    twice_pp += 2
        m_o = (twice_pp - 2 * _twice_j_gen_marks(p, o_marks, n) + twice_oo) // 2 + 1
        m_x = (twice_pp - 2 * _twice_j_gen_marks(p, x_marks, n) + twice_xx) // 2 + 1
        mas[t] = m_o
        alex[t] = (m_o - m_x - (n - 1)) // 2
        if (m_o - m_x - (n - 1)) % 2 != 0:
            alex[t] = -(1 << 40)
    return mas, alex


# ---------------------------------------------------------------------------
# rectangles


@numba.njit(cache=True)
def _mark_free_table(x_marks, o_marks):
    # free[a, w, b, h]: rectangle with lower-left lattice corner (a, b),
    # width w, height h (torus-wrapped) contains no X or O
    n = x_marks.shape[0]
    free = np.ones((n, n + 1, n, n + 1), dtype=np.bool_)
    for a in range(n):
        for w in range(1, n):
            for b in range(n):
                for h in range(1, n):
                    ok = True
                    for r in range(n):
                        if (r - b) % n < h:
                            if (x_marks[r] - a) % n < w or (o_marks[r] - a) % n < w:
                                ok = False
                                break
                    free[a, w, b, h] = ok
    return free


@numba.njit(cache=True)
def _lex_rank(p, fact):
    n = p.shape[0]
    rk = 0
    for i in range(n):
        smaller = 0
        for j in range(i + 1, n):
            if p[j] < p[i]:
                smaller += 1
        rk += smaller * fact[n - 1 - i]
    return rk


@numba.njit(cache=True)
def _empty_rect(p, a, w, b, h, n):
    for k in range(1, w):
        c = (a + k) % n
        if 0 < (p[c] - b) % n < h:
            return False
    return True


@numba.njit(cache=True, nogil=True)
def _rectangle_edges(perms, free, lo, hi):
    n = perms.shape[1]
    fact = np.ones(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        fact[k] = fact[k - 1] * k
    cap = 1024
    src = np.empty(cap, dtype=np.int64)
    dst = np.empty(cap, dtype=np.int64)
    m = 0
    y = np.empty(n, dtype=np.int8)
    for t in range(lo, hi):
        p = perms[t]
        for i in range(n):
            for j in range(i + 1, n):
                for kind in range(2):
                    if kind == 0:
                        a, w, b = i, j - i, p[i]
                        h = (p[j] - p[i]) % n
                    else:
                        a, w, b = j, n - (j - i), p[j]
                        h = (p[i] - p[j]) % n
                    if not free[a, w, b, h]:
                        continue
                    if not _empty_rect(p, a, w, b, h, n):
                        continue
                    y[:] = p
                    y[i] = p[j]
                    y[j] = p[i]
                    if m == cap:
                        cap *= 2
                        s2 = np.empty(cap, dtype=np.int64)
                        d2 = np.empty(cap, dtype=np.int64)
                        s2[:m] = src[:m]
                        d2[:m] = dst[:m]
                        src, dst = s2, d2
                    src[m] = t
                    dst[m] = _lex_rank(y, fact)
                    m += 1
    return src[:m].copy(), dst[:m].copy()


def generators(g: GridDiagram) -> np.ndarray:
    """All n! generators in lexicographic order, one row each."""
    return _all_permutations(g.n)


@dataclass
class TildeComplex:
    """The tilde grid complex split into (Maslov, Alexander) blocks.

    ``members[label]`` lists the lexicographic indices of the generators in
    the block, in increasing order; block-local index i is ``members[label][i]``.
    """

    grid: GridDiagram
    complex: GradedComplex
    members: dict[tuple[int, int], np.ndarray]


def tilde_complex(
    g: GridDiagram,
    *,
    max_grid: int | None = DEFAULT_MAX_GRID,
    check: bool = True,
) -> TildeComplex:
    """Build the tilde complex of ``g`` bucketed by bigrading."""
    n = g.n
    if max_grid is not None and n > max_grid:
        raise GridError(f"grid size {n} exceeds the cap of {max_grid}")
    perms = generators(g)
    xm = np.array(g.x_marks, dtype=np.int64)
    om = np.array(g.o_marks, dtype=np.int64)
    mas, alex = _grade_all(perms, xm, om)
    if np.any(alex == -(1 << 40)):
        raise GridError("non-integral Alexander grading; the diagram is not a knot")

    # bucket by bigrading; lexicographic order is kept within each block
    keys = np.stack([mas, alex], axis=1)
    labels, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(inverse, kind="stable")
    counts = np.bincount(inverse, minlength=len(labels))
    starts = np.concatenate([[0], np.cumsum(counts)])
    local = np.empty(len(perms), dtype=np.int64)
    local[order] = np.arange(len(perms)) - np.repeat(starts[:-1], counts)
    members = {
        (int(labels[b, 0]), int(labels[b, 1])): order[starts[b]:starts[b + 1]]
        for b in range(len(labels))
    }
    dims = {lab: len(v) for lab, v in members.items()}

    free = _mark_free_table(xm, om)
    src, dst = _rectangle_edges(perms, free, 0, len(perms))
    if np.any(alex[src] != alex[dst]) or np.any(mas[dst] != mas[src] - 1):
        raise GridError("rectangle differential does not have bidegree (-1, 0)")

    diffs = {}
    if src.size:
        bsrc = inverse[src]
        eorder = np.argsort(bsrc, kind="stable")
        bsrc_sorted = bsrc[eorder]
        bounds = np.flatnonzero(np.diff(bsrc_sorted)) + 1
        for chunk in np.split(eorder, bounds):
            b = int(inverse[src[chunk[0]]])
            s_lab = (int(labels[b, 0]), int(labels[b, 1]))
            t_lab = (s_lab[0] - 1, s_lab[1])
            d = SparseBoolMatrix.from_coo(
                dims[t_lab], dims[s_lab], local[dst[chunk]], local[src[chunk]], reduce=True
            )
            if d.nnz:
                diffs[(s_lab, t_lab)] = d
    # every block maps to the block one Maslov lower when that block exists
    for lab in dims:
        t_lab = (lab[0] - 1, lab[1])
        if t_lab in dims and (lab, t_lab) not in diffs:
            diffs[(lab, t_lab)] = SparseBoolMatrix.zeros(dims[t_lab], dims[lab])
    return TildeComplex(g, GradedComplex(dims, diffs, check=check), members)


# ---------------------------------------------------------------------------
# rank tables


class BigradedRanks(Mapping):
    """Finitely supported (maslov, alexander) -> rank table; zero ranks are dropped."""

    def __init__(self, entries: Mapping[tuple[int, int], int] | Iterable = ()):
        data = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (m, a), r in items:
            r = int(r)
            if r < 0:
                raise ValueError(f"negative rank {r} at {(m, a)}")
            if r:
                data[(int(m), int(a))] = r
        self._data = dict(sorted(data.items(), key=lambda kv: (-kv[0][1], -kv[0][0])))

    def __getitem__(self, key):
        return self._data.get(tuple(key), 0)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._data

    def __eq__(self, other) -> bool:
        if isinstance(other, BigradedRanks):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == BigradedRanks(other)._data
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._data.items()))

    def __repr__(self) -> str:
        return f"BigradedRanks({self._data})"

    def total(self) -> int:
        return sum(self._data.values())

    def alexander_totals(self) -> dict[int, int]:
        """Total rank per Alexander grading, highest grading first."""
        out: dict[int, int] = defaultdict(int)
        for (_, a), r in self._data.items():
            out[a] += r
        return dict(sorted(out.items(), reverse=True))

    def is_symmetric(self) -> bool:
        tot = self.alexander_totals()
        return all(tot.get(-a, 0) == r for a, r in tot.items())

    def mirror(self) -> "BigradedRanks":
        return BigradedRanks({(-m, -a): r for (m, a), r in self._data.items()})

    def triples(self) -> list[tuple[int, int, int]]:
        """(alexander, maslov, rank), decreasing Alexander then decreasing Maslov."""
        return [(a, m, r) for (m, a), r in self._data.items()]


def tilde_ranks(g: GridDiagram, *, max_grid: int | None = DEFAULT_MAX_GRID, threads: int = 1,
                check: bool = True) -> BigradedRanks:
    tc = tilde_complex(g, max_grid=max_grid, check=check)
    return BigradedRanks(homology_ranks(tc.complex, threads=threads))


def hat_ranks(tilde: Mapping[tuple[int, int], int], n: int) -> BigradedRanks:
    """Strip the 2^(n-1) factor from tilde grid homology.

    Solves ``tilde(m, a) = sum_k C(n-1, k) hat(m+k, a+k)`` from the top
    Alexander grading down.
    """
    tilde = BigradedRanks(tilde)
    if not tilde:
        return BigradedRanks()
    hat: dict[tuple[int, int], int] = {}
    alexes = sorted({a for _, a in tilde}, reverse=True)
    binom = [math.comb(n - 1, k) for k in range(n)]
    for a in range(alexes[0], alexes[-1] - 1, -1):
        ms = {m for (m, aa) in tilde if aa == a}
        ms |= {m - k for (m, aa) in hat for k in range(1, n) if aa - k == a}
        for m in sorted(ms, reverse=True):
            v = tilde[(m, a)] - sum(binom[k] * hat.get((m + k, a + k), 0) for k in range(1, n))
            if v < 0:
                raise ValueError(f"negative hat rank at {(m, a)}; input is not a tilde table of size {n}")
            if v:
                hat[(m, a)] = v
    return BigradedRanks(hat)


def tilde_from_hat(hat: Mapping[tuple[int, int], int], n: int) -> BigradedRanks:
    out: dict[tuple[int, int], int] = defaultdict(int)
    for (m, a), r in hat.items():
        for k in range(n):
            out[(m - k, a - k)] += math.comb(n - 1, k) * r
    return BigradedRanks(out)


def knot_floer_ranks(g: GridDiagram, *, max_grid: int | None = DEFAULT_MAX_GRID, threads: int = 1,
                     check: bool = True) -> BigradedRanks:
    """Hat knot Floer homology of the knot encoded by ``g``."""
    return hat_ranks(tilde_ranks(g, max_grid=max_grid, threads=threads, check=check), g.n)


def genus(h: BigradedRanks) -> int:
    if not h:
        raise ValueError("empty rank table")
    return max(a for (_, a) in h)


def is_fibered(h: BigradedRanks) -> bool:
    if not h:
        return False
    return BigradedRanks(h).alexander_totals()[genus(h)] == 1


@dataclass(frozen=True)
class BoundReport:
    """Outcome of the fixed-point bound for a fibered knot's monodromy.

    ``bound`` is None when the knot is not fibered. ``contradiction`` marks
    a fibered table with r = 0 in positive genus, which cannot come from a
    genuine knot. Genus 0 (the unknot) is reported with bound 0.
    """

    genus: int
    fibered: bool
    r: int | None
    bound: int | None
    contradiction: bool = False

    @property
    def applicable(self) -> bool:
        return self.bound is not None


def fixed_point_bound(h: BigradedRanks) -> BoundReport:
    h = BigradedRanks(h)
    g = genus(h)
    if not is_fibered(h):
        return BoundReport(g, False, None, None)
    r = h.alexander_totals().get(g - 1, 0)
    if g == 0:
        return BoundReport(g, True, r, 0)
    if r == 0:
        return BoundReport(g, True, 0, None, contradiction=True)
    return BoundReport(g, True, r, r - 1)


def kunneth_convolve(h1: Mapping, h2: Mapping) -> BigradedRanks:
    """Rank table of a connected sum from the tables of its summands."""
    out: dict[tuple[int, int], int] = defaultdict(int)
    for (m1, a1), r1 in h1.items():
        for (m2, a2), r2 in h2.items():
            out[(m1 + m2, a1 + a2)] += r1 * r2
    return BigradedRanks(out)


def random_grid(rng, n: int) -> GridDiagram:
    """A uniformly random knot grid of size ``n`` (rejection sampling).

    ``rng`` is a :class:`random.Random`.
    """
    while True:
        x = list(range(n))
        o = list(range(n))
        rng.shuffle(x)
        rng.shuffle(o)
        if any(a == b for a, b in zip(x, o)):
            continue
        try:
            return GridDiagram(tuple(x), tuple(o))
        except GridError:
            continue
