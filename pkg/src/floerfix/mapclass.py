"""
Combinatorial model of a perturbed standard-form surface diffeomorphism.

A :class:`Decomposition` records the pieces of the surface cut along the
invariant annuli: fixed components (pointwise fixed), periodic components,
pseudo-Anosov components with their Nielsen class census, and the annuli
themselves. From it we evaluate the rank of symplectic Floer homology,
including the two generators contributed by each flip-twist annulus,
together with the Nielsen and Lefschetz numbers.

Boundary signs, the pseudo-Anosov fixed point census and periodic fixed
point counts are inputs; nothing here derives them from a mapping class.
"""

from __future__ import annotations

import json
import logging
import random
from collections import defaultdict
from dataclasses import asdict, dataclass, field

from .surfaces import SurfacePiece, rel_betti

log = logging.getLogger(__name__)

NIELSEN_KINDS = ("IIIa", "IIIb", "IIIc", "IIId")


class DecompositionError(ValueError):
    """Input that does not describe a valid standard-form decomposition."""


class InvariantViolation(AssertionError):
    """An identity that must hold for every valid decomposition failed."""

    def __init__(self, report: "BoundReport"):
        failed = ", ".join(k for k, ok in report.checks.items() if not ok)
        super().__init__(f"invariant checks failed: {failed}")
        self.report = report


@dataclass(frozen=True)
class Annulus:
    id: str
    kind: str  # "twist" | "flip_twist"
    direction: str  # "positive" | "negative"
    period: int = 1

    @property
    def fixed_points(self) -> int:
        # twist maps with period 1 have none in the interior; permuted annuli have none
        return 2 if self.kind == "flip_twist" and self.period == 1 else 0


@dataclass(frozen=True)
class FixedBoundary:
    id: str
    attachment: str  # annulus id or pseudo-Anosov boundary id
    sign: str  # "minus" | "plus"
    prongs: int | None = None


@dataclass(frozen=True)
class FixedComponent:
    id: str
    genus: int
    boundaries: tuple[FixedBoundary, ...] = ()

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.boundaries)

    @property
    def minus_count(self) -> int:
        return sum(1 for b in self.boundaries if b.sign == "minus")


@dataclass(frozen=True)
class PeriodicComponent:
    id: str
    genus: int
    boundaries: tuple[str, ...]
    period: int
    fixed_point_count: int = 0
    h1_trace: int | None = None

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.boundaries)


@dataclass(frozen=True)
class PABoundary:
    id: str
    prongs: int


@dataclass(frozen=True)
class NielsenClass:
    point_count: int
    index_per_point: int
    kind: str
    prongs: int | None = None
    abuts_fixed_component: bool = False

    @property
    def absorbed(self) -> bool:
        """Counted with the neighbouring fixed component rather than here."""
        return self.kind == "IIId" and self.abuts_fixed_component


@dataclass(frozen=True)
class PAComponent:
    id: str
    genus: int
    boundaries: tuple[PABoundary, ...]
    nielsen_classes: tuple[NielsenClass, ...] = ()

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.boundaries)


@dataclass(frozen=True)
class Gluing:
    """Glues a component boundary to an annulus side or to a pseudo-Anosov boundary."""

    boundary: str
    annulus: str | None = None
    side: int | None = None
    pa_boundary: str | None = None


@dataclass(frozen=True)
class Decomposition:
    total_genus: int
    fixed_components: tuple[FixedComponent, ...] = ()
    periodic_components: tuple[PeriodicComponent, ...] = ()
    pa_components: tuple[PAComponent, ...] = ()
    annuli: tuple[Annulus, ...] = ()
    adjacency: tuple[Gluing, ...] = ()

    def __post_init__(self):
        validate(self)

    @property
    def n_flip(self) -> int:
        return sum(1 for a in self.annuli if a.kind == "flip_twist" and a.period == 1)

    @property
    def euler_characteristic(self) -> int:
        return sum(
            c.euler_characteristic
            for c in (*self.fixed_components, *self.periodic_components, *self.pa_components)
        )

    @property
    def is_identity_class(self) -> bool:
        return (
            len(self.fixed_components) == 1
            and not self.fixed_components[0].boundaries
            and not (self.periodic_components or self.pa_components or self.annuli)
        )

    def to_dict(self) -> dict:
        def clean(obj):
            d = asdict(obj)
            return {k: v for k, v in d.items() if v is not None}

        return {
            "total_genus": self.total_genus,
            "fixed_components": [
                {"id": c.id, "genus": c.genus, "boundaries": [clean(b) for b in c.boundaries]}
                for c in self.fixed_components
            ],
            "periodic_components": [clean(c) | {"boundaries": list(c.boundaries)} for c in self.periodic_components],
            "pa_components": [
                {
                    "id": c.id,
                    "genus": c.genus,
                    "boundaries": [asdict(b) for b in c.boundaries],
                    "nielsen_classes": [clean(k) for k in c.nielsen_classes],
                }
                for c in self.pa_components
            ],
            "annuli": [asdict(a) for a in self.annuli],
            "adjacency": [clean(g) for g in self.adjacency],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# validation


def validate(d: Decomposition) -> None:
    """Raise :class:`DecompositionError` unless ``d`` is a consistent decomposition."""
    if d.total_genus < 2:
        raise DecompositionError(f"total_genus: must be at least 2, got {d.total_genus}")

    ids: set[str] = set()

    def claim(i, where):
        if i in ids:
            raise DecompositionError(f"{where}: duplicate id {i!r}")
        ids.add(i)

    boundary_owner: dict[str, tuple[str, str]] = {}  # boundary id -> (kind, component id)
    pa_prongs: dict[str, int] = {}
    fixed_bdry: dict[str, FixedBoundary] = {}

    for i, c in enumerate(d.fixed_components):
        w = f"fixed_components[{i}]"
        claim(c.id, w)
        if c.genus < 0:
            raise DecompositionError(f"{w}.genus: must be nonnegative")
        if c.euler_characteristic > 0:
            raise DecompositionError(f"{w}: a disk or sphere cannot be a standard-form piece")
        for j, b in enumerate(c.boundaries):
            claim(b.id, f"{w}.boundaries[{j}]")
            if b.sign not in ("minus", "plus"):
                raise DecompositionError(f"{w}.boundaries[{j}].sign: expected 'minus' or 'plus', got {b.sign!r}")
            boundary_owner[b.id] = ("fixed", c.id)
            fixed_bdry[b.id] = b
    for i, c in enumerate(d.periodic_components):
        w = f"periodic_components[{i}]"
        claim(c.id, w)
        if c.genus < 0:
            raise DecompositionError(f"{w}.genus: must be nonnegative")
        if c.euler_characteristic > 0:
            raise DecompositionError(f"{w}: a disk or sphere cannot be a standard-form piece")
        if c.period < 1:
            raise DecompositionError(f"{w}.period: must be at least 1")
        if c.fixed_point_count < 0:
            raise DecompositionError(
                f"{w}.fixed_point_count: negative Lefschetz contribution {c.fixed_point_count}"
            )
        if c.period > 1 and c.fixed_point_count:
            raise DecompositionError(f"{w}.fixed_point_count: a permuted component has no fixed points")
        for j, b in enumerate(c.boundaries):
            claim(b, f"{w}.boundaries[{j}]")
            boundary_owner[b] = ("periodic", c.id)
    for i, c in enumerate(d.pa_components):
        w = f"pa_components[{i}]"
        claim(c.id, w)
        if c.genus < 0:
            raise DecompositionError(f"{w}.genus: must be nonnegative")
        if c.euler_characteristic >= 0:
            raise DecompositionError(f"{w}: pseudo-Anosov pieces need negative Euler characteristic")
        for j, b in enumerate(c.boundaries):
            claim(b.id, f"{w}.boundaries[{j}]")
            if b.prongs < 1:
                raise DecompositionError(f"{w}.boundaries[{j}].prongs: must be at least 1")
            boundary_owner[b.id] = ("pa", c.id)
            pa_prongs[b.id] = b.prongs
        for j, k in enumerate(c.nielsen_classes):
            kw = f"{w}.nielsen_classes[{j}]"
            if k.kind not in NIELSEN_KINDS:
                raise DecompositionError(f"{kw}.kind: expected one of {NIELSEN_KINDS}, got {k.kind!r}")
            if k.point_count < 1:
                raise DecompositionError(f"{kw}.point_count: must be at least 1")
            if k.index_per_point == 0:
                raise DecompositionError(f"{kw}.index_per_point: must be nonzero")
            if k.kind in ("IIIa", "IIIc") and k.point_count != 1:
                raise DecompositionError(f"{kw}.point_count: {k.kind} classes are singletons")
            if k.kind in ("IIIb", "IIIc") and (k.prongs is None or k.prongs < 1):
                raise DecompositionError(f"{kw}.prongs: required for {k.kind}")
            if k.abuts_fixed_component and k.kind != "IIId":
                raise DecompositionError(f"{kw}.abuts_fixed_component: only meaningful for IIId")

    annuli = {}
    for i, a in enumerate(d.annuli):
        w = f"annuli[{i}]"
        claim(a.id, w)
        if a.kind not in ("twist", "flip_twist"):
            raise DecompositionError(f"{w}.kind: expected 'twist' or 'flip_twist', got {a.kind!r}")
        if a.direction not in ("positive", "negative"):
            raise DecompositionError(f"{w}.direction: expected 'positive' or 'negative', got {a.direction!r}")
        if a.period < 1:
            raise DecompositionError(f"{w}.period: must be at least 1")
        annuli[a.id] = a

    # gluings: every component boundary exactly once, every annulus side exactly once
    glued: dict[str, str] = {}
    sides: dict[tuple[str, int], str] = {}
    edges: list[tuple[str, str]] = []
    for i, g in enumerate(d.adjacency):
        w = f"adjacency[{i}]"
        if g.boundary not in boundary_owner:
            raise DecompositionError(f"{w}.boundary: unknown boundary {g.boundary!r}")
        if g.boundary in glued:
            raise DecompositionError(f"{w}.boundary: {g.boundary!r} is glued twice")
        kind, owner = boundary_owner[g.boundary]
        if (g.annulus is None) == (g.pa_boundary is None):
            raise DecompositionError(f"{w}: give exactly one of 'annulus' or 'pa_boundary'")
        if g.annulus is not None:
            if g.annulus not in annuli:
                raise DecompositionError(f"{w}.annulus: unknown annulus {g.annulus!r}")
            if g.side not in (0, 1):
                raise DecompositionError(f"{w}.side: expected 0 or 1")
            if (g.annulus, g.side) in sides:
                raise DecompositionError(f"{w}: side {g.side} of {g.annulus!r} is glued twice")
            sides[(g.annulus, g.side)] = g.boundary
            glued[g.boundary] = g.annulus
            edges.append((owner, g.annulus))
            if kind == "fixed" and annuli[g.annulus].fixed_points:
                raise DecompositionError(
                    f"{w}: flip-twist annulus {g.annulus!r} exchanges its sides and cannot border a fixed component"
                )
            if kind == "fixed" and annuli[g.annulus].period > 1:
                raise DecompositionError(
                    f"{w}: annulus {g.annulus!r} is permuted (period > 1) and cannot border a fixed component"
                )
        else:
            if kind != "fixed":
                raise DecompositionError(f"{w}: only fixed components glue directly to pseudo-Anosov boundaries")
            pb = g.pa_boundary
            if pb not in pa_prongs:
                raise DecompositionError(f"{w}.pa_boundary: unknown pseudo-Anosov boundary {pb!r}")
            if pb in glued:
                raise DecompositionError(f"{w}.pa_boundary: {pb!r} is glued twice")
            glued[g.boundary] = pb
            glued[pb] = g.boundary
            edges.append((owner, boundary_owner[pb][1]))
    for b in boundary_owner:
        if b not in glued:
            raise DecompositionError(f"boundary {b!r} is not glued to anything")
    for a in annuli:
        for s in (0, 1):
            if (a, s) not in sides:
                raise DecompositionError(f"annulus {a!r} side {s} is not glued to anything")

    for bid, b in fixed_bdry.items():
        if b.attachment != glued[bid]:
            raise DecompositionError(
                f"boundary {bid!r}: attachment {b.attachment!r} disagrees with adjacency ({glued[bid]!r})"
            )
        if b.attachment in pa_prongs:
            if b.prongs != pa_prongs[b.attachment]:
                raise DecompositionError(
                    f"boundary {bid!r}: prongs {b.prongs} disagree with pseudo-Anosov boundary "
                    f"{b.attachment!r} ({pa_prongs[b.attachment]})"
                )
        elif b.prongs is not None:
            raise DecompositionError(f"boundary {bid!r}: prongs given but not attached to a pseudo-Anosov boundary")

    for i, c in enumerate(d.pa_components):
        if any(k.abuts_fixed_component for k in c.nielsen_classes):
            if not any(glued[b.id] in fixed_bdry for b in c.boundaries):
                raise DecompositionError(
                    f"pa_components[{i}]: a IIId class abuts a fixed component but none is adjacent"
                )

    # connectivity and Euler characteristic of the glued surface
    nodes = [c.id for c in (*d.fixed_components, *d.periodic_components, *d.pa_components)] + list(annuli)
    if not nodes:
        raise DecompositionError("decomposition has no components")
    nbr = defaultdict(set)
    for u, v in edges:
        nbr[u].add(v)
        nbr[v].add(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        u = stack.pop()
        for v in nbr[u] - seen:
            seen.add(v)
            stack.append(v)
    if len(seen) != len(nodes):
        raise DecompositionError("glued surface is disconnected")
    expected = 2 - 2 * d.total_genus
    if d.euler_characteristic != expected:
        raise DecompositionError(
            f"Euler characteristic mismatch: components give chi = {d.euler_characteristic}, "
            f"expected 2 - 2*{d.total_genus} = {expected}"
        )


# ---------------------------------------------------------------------------
# parsing


def _take(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise DecompositionError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise DecompositionError(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise DecompositionError(f"{where}: missing field(s) {', '.join(missing)}")
    return obj


def _int(v, where, optional=False):
    if v is None and optional:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise DecompositionError(f"{where}: expected an integer, got {v!r}")
    return v


def _str(v, where):
    if not isinstance(v, str):
        raise DecompositionError(f"{where}: expected a string, got {v!r}")
    return v


def _list(v, where):
    if not isinstance(v, list):
        raise DecompositionError(f"{where}: expected a list")
    return v


def from_dict(data: dict) -> Decomposition:
    """Build and validate a decomposition from its JSON-shaped dictionary."""
    top = ("total_genus", "fixed_components", "periodic_components", "pa_components", "annuli", "adjacency")
    _take(data, top, top, "decomposition")

    fixed = []
    for i, c in enumerate(_list(data["fixed_components"], "fixed_components")):
        w = f"fixed_components[{i}]"
        _take(c, ("id", "genus", "boundaries"), ("id", "genus", "boundaries"), w)
        bds = []
        for j, b in enumerate(_list(c["boundaries"], f"{w}.boundaries")):
            bw = f"{w}.boundaries[{j}]"
            _take(b, ("id", "attachment", "sign", "prongs"), ("id", "attachment", "sign"), bw)
            bds.append(FixedBoundary(
                _str(b["id"], f"{bw}.id"), _str(b["attachment"], f"{bw}.attachment"),
                _str(b["sign"], f"{bw}.sign"), _int(b.get("prongs"), f"{bw}.prongs", optional=True),
            ))
        fixed.append(FixedComponent(_str(c["id"], f"{w}.id"), _int(c["genus"], f"{w}.genus"), tuple(bds)))

    periodic = []
    for i, c in enumerate(_list(data["periodic_components"], "periodic_components")):
        w = f"periodic_components[{i}]"
        _take(c, ("id", "genus", "boundaries", "period", "fixed_point_count", "h1_trace"),
              ("id", "genus", "boundaries", "period", "fixed_point_count"), w)
        periodic.append(PeriodicComponent(
            _str(c["id"], f"{w}.id"), _int(c["genus"], f"{w}.genus"),
            tuple(_str(b, f"{w}.boundaries[{j}]") for j, b in enumerate(_list(c["boundaries"], f"{w}.boundaries"))),
            _int(c["period"], f"{w}.period"), _int(c["fixed_point_count"], f"{w}.fixed_point_count"),
            _int(c.get("h1_trace"), f"{w}.h1_trace", optional=True),
        ))

    pas = []
    for i, c in enumerate(_list(data["pa_components"], "pa_components")):
        w = f"pa_components[{i}]"
        _take(c, ("id", "genus", "boundaries", "nielsen_classes"), ("id", "genus", "boundaries", "nielsen_classes"), w)
        bds = []
        for j, b in enumerate(_list(c["boundaries"], f"{w}.boundaries")):
            bw = f"{w}.boundaries[{j}]"
            _take(b, ("id", "prongs"), ("id", "prongs"), bw)
            bds.append(PABoundary(_str(b["id"], f"{bw}.id"), _int(b["prongs"], f"{bw}.prongs")))
        classes = []
        for j, k in enumerate(_list(c["nielsen_classes"], f"{w}.nielsen_classes")):
            kw = f"{w}.nielsen_classes[{j}]"
            _take(k, ("point_count", "index_per_point", "kind", "prongs", "abuts_fixed_component"),
                  ("point_count", "index_per_point", "kind"), kw)
            abuts = k.get("abuts_fixed_component", False)
            if not isinstance(abuts, bool):
                raise DecompositionError(f"{kw}.abuts_fixed_component: expected true or false")
            classes.append(NielsenClass(
                _int(k["point_count"], f"{kw}.point_count"), _int(k["index_per_point"], f"{kw}.index_per_point"),
                _str(k["kind"], f"{kw}.kind"), _int(k.get("prongs"), f"{kw}.prongs", optional=True), abuts,
            ))
        pas.append(PAComponent(_str(c["id"], f"{w}.id"), _int(c["genus"], f"{w}.genus"), tuple(bds), tuple(classes)))

    annuli = []
    for i, a in enumerate(_list(data["annuli"], "annuli")):
        w = f"annuli[{i}]"
        _take(a, ("id", "kind", "direction", "period"), ("id", "kind", "direction"), w)
        annuli.append(Annulus(
            _str(a["id"], f"{w}.id"), _str(a["kind"], f"{w}.kind"),
            _str(a["direction"], f"{w}.direction"), _int(a.get("period", 1), f"{w}.period"),
        ))

    adjacency = []
    for i, g in enumerate(_list(data["adjacency"], "adjacency")):
        w = f"adjacency[{i}]"
        _take(g, ("boundary", "annulus", "side", "pa_boundary"), ("boundary",), w)
        adjacency.append(Gluing(
            _str(g["boundary"], f"{w}.boundary"),
            None if g.get("annulus") is None else _str(g["annulus"], f"{w}.annulus"),
            _int(g.get("side"), f"{w}.side", optional=True),
            None if g.get("pa_boundary") is None else _str(g["pa_boundary"], f"{w}.pa_boundary"),
        ))

    return Decomposition(
        _int(data["total_genus"], "total_genus"), tuple(fixed), tuple(periodic), tuple(pas),
        tuple(annuli), tuple(adjacency),
    )


def loads(text: str) -> Decomposition:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecompositionError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
    return from_dict(data)


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class FixedClassification:
    """Fixed components sorted by how they meet pseudo-Anosov pieces."""

    a: tuple[FixedComponent, ...]
    b: dict[int, tuple[FixedComponent, ...]]  # keyed by prong count p
    c: dict[int, tuple[FixedComponent, ...]]  # keyed by total prong count q


def _pa_attachments(c: FixedComponent) -> list[FixedBoundary]:
    return [b for b in c.boundaries if b.prongs is not None]


def classify_fixed(d: Decomposition) -> FixedClassification:
    a, b, c = [], defaultdict(list), defaultdict(list)
    for comp in d.fixed_components:
        att = _pa_attachments(comp)
        if not att:
            a.append(comp)
        elif len(att) == 1:
            b[att[0].prongs].append(comp)
        else:
            c[sum(x.prongs for x in att)].append(comp)
    return FixedClassification(
        tuple(a), {p: tuple(v) for p, v in sorted(b.items())}, {q: tuple(v) for q, v in sorted(c.items())}
    )


def _rel_total(comp: FixedComponent, punctures: int = 0) -> int:
    piece = SurfacePiece(comp.genus, len(comp.boundaries), comp.minus_count, punctures)
    return sum(rel_betti(piece))


def periodic_lefschetz(d: Decomposition) -> int:
    return sum(c.fixed_point_count for c in d.periodic_components)


@dataclass(frozen=True)
class RankBreakdown:
    total: int
    summands: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, int]:
        return dict(self.summands)


def hf_symp_rank(d: Decomposition) -> RankBreakdown:
    """Rank of symplectic Floer homology, summand by summand."""
    cls = classify_fixed(d)
    summands = [("sigma_a", sum(_rel_total(c) for c in cls.a))]
    for p, comps in cls.b.items():
        summands.append((f"sigma_b[p={p}]", sum(_rel_total(c, punctures=1) for c in comps)))
        summands.append((f"prongs_b[p={p}]", (p - 1) * len(comps)))
    for q, comps in cls.c.items():
        summands.append((f"sigma_c[q={q}]", sum(_rel_total(c) for c in comps)))
        summands.append((f"prongs_c[q={q}]", q * len(comps)))
    lam = periodic_lefschetz(d)
    if lam < 0:
        raise DecompositionError(f"Lefschetz number of the periodic part is negative ({lam})")
    summands.append(("periodic", lam))
    summands.append(("flip_twist", 2 * d.n_flip))
    summands.append((
        "pseudo_anosov",
        sum(k.point_count for c in d.pa_components for k in c.nielsen_classes if not k.absorbed),
    ))
    return RankBreakdown(sum(v for _, v in summands), tuple(summands))


def hf_symp_rank_uncorrected(d: Decomposition) -> int:
    """The same count without the flip-twist annuli's generators."""
    return hf_symp_rank(d).total - 2 * d.n_flip


@dataclass(frozen=True)
class NielsenClassRecord:
    source: str
    index: int


def nielsen_classes(d: Decomposition) -> list[NielsenClassRecord]:
    """One record per Nielsen class of fixed points, with its total index."""
    out = [NielsenClassRecord(f"fixed:{c.id}", c.euler_characteristic) for c in d.fixed_components]
    for c in d.periodic_components:
        out += [NielsenClassRecord(f"periodic:{c.id}", 1)] * c.fixed_point_count
    for a in d.annuli:
        out += [NielsenClassRecord(f"annulus:{a.id}", 1)] * a.fixed_points
    for c in d.pa_components:
        for k in c.nielsen_classes:
            if not k.absorbed:
                out.append(NielsenClassRecord(f"pa:{c.id}:{k.kind}", k.point_count * k.index_per_point))
    return out


def annulus_lefschetz(d: Decomposition) -> int:
    return sum(a.fixed_points for a in d.annuli)


def lefschetz_number(d: Decomposition) -> int:
    """Total fixed point index, accumulated piece by piece."""
    return (
        sum(c.euler_characteristic for c in d.fixed_components)
        + periodic_lefschetz(d)
        + annulus_lefschetz(d)
        + sum(k.point_count * k.index_per_point for c in d.pa_components for k in c.nielsen_classes if not k.absorbed)
    )


def nielsen_number(d: Decomposition) -> int:
    return sum(1 for k in nielsen_classes(d) if k.index != 0)


@dataclass
class BoundReport:
    rank: int
    rank_uncorrected: int
    breakdown: tuple[tuple[str, int], ...]
    n_flip: int
    nielsen: int
    lefschetz: int
    slack: int
    checks: dict[str, bool] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "summands": dict(self.breakdown),
            "rank": self.rank,
            "rank_uncorrected": self.rank_uncorrected,
            "n_flip": self.n_flip,
            "nielsen": self.nielsen,
            "lefschetz": self.lefschetz,
            "slack": self.slack,
            "checks": dict(self.checks),
            "warnings": list(self.warnings),
        }


def verify_bound(d: Decomposition, *, strict: bool = True) -> BoundReport:
    """Evaluate every count and check the identities relating them.

    With ``strict`` a failed check raises :class:`InvariantViolation`
    (carrying the report); that would point at a modelling bug.
    """
    hf = hf_symp_rank(d)
    unc = hf_symp_rank_uncorrected(d)
    n = nielsen_number(d)
    lam = lefschetz_number(d)
    classes = nielsen_classes(d)
    checks = {
        "nielsen_le_rank": n <= hf.total,
        "correction_is_2nf": hf.total - unc == 2 * d.n_flip,
        "annulus_lefschetz_is_2nf": annulus_lefschetz(d) == 2 * d.n_flip,
        "lefschetz_hopf": lam == sum(k.index for k in classes),
        "breakdown_totals": sum(v for _, v in hf.summands) == hf.total,
        "euler_characteristic": d.euler_characteristic == 2 - 2 * d.total_genus,
    }
    traced = [c for c in d.periodic_components if c.h1_trace is not None]
    if traced:
        checks["periodic_homological_lefschetz"] = all(
            c.fixed_point_count == _periodic_homological_lefschetz(c) for c in traced
        )
    warnings = []
    if d.is_identity_class:
        warnings.append("identity mapping class: evaluated as a single fixed component")
        log.warning(warnings[-1])
    report = BoundReport(hf.total, unc, hf.summands, d.n_flip, n, lam, hf.total - n, checks, warnings)
    if strict and not report.ok:
        raise InvariantViolation(report)
    return report


def _periodic_homological_lefschetz(c: PeriodicComponent) -> int:
    # for period > 1, h1_trace is the trace on H_1 of the whole orbit and H_0 contributes 0
    if c.period > 1:
        return -c.h1_trace
    top = 1 if not c.boundaries else 0
    return 1 - c.h1_trace + top


# ---------------------------------------------------------------------------
# random generation


def random_decomposition(seed: int, size_budget: int = 6, *, flip_weight: float = 0.35) -> Decomposition:
    """A random valid decomposition with at most ``size_budget`` pieces.

    Deterministic in ``seed``. Pieces are joined along a random spanning
    tree plus extra gluings; flip-twist annuli are only placed between
    non-fixed pieces.
    """
    rng = random.Random(seed)
    size_budget = max(1, size_budget)
    while True:
        d = _try_random(rng, size_budget, flip_weight)
        if d is not None:
            return d


def _try_random(rng: random.Random, budget: int, flip_weight: float) -> Decomposition | None:
    k = rng.randint(1, budget)
    if k == 1 and rng.random() < 0.1:
        g = rng.randint(2, 4)
        return Decomposition(g, (FixedComponent("F0", g, ()),))

    kinds = [rng.choice(("fixed", "periodic", "pa")) for _ in range(k)]
    # spanning tree plus a few extra edges; each edge consumes one boundary on each end
    edges = [(rng.randrange(i), i) for i in range(1, k)]
    for _ in range(rng.randint(0, 2)):
        u, v = rng.randrange(k), rng.randrange(k)
        edges.append((u, v))
    if not edges:
        edges.append((0, 0))
    degree = [0] * k
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    genera = []
    for i in range(k):
        g = rng.choice((0, 0, 1, 1, 2))
        chi = 2 - 2 * g - degree[i]
        if kinds[i] == "pa" and chi >= 0:
            g += 1
        elif chi > 0:
            g += 1
        genera.append(g)
    total = sum(genera) + len(edges) - k + 1
    if total < 2:
        genera[rng.randrange(k)] += 2 - total
        total = 2

    names = {"fixed": "F", "periodic": "P", "pa": "X"}
    cid = [f"{names[kinds[i]]}{i}" for i in range(k)]
    slots: list[list[str]] = [[] for _ in range(k)]
    for i in range(k):
        slots[i] = [f"{cid[i]}.{j}" for j in range(degree[i])]
    cursor = [0] * k

    def next_slot(i):
        s = slots[i][cursor[i]]
        cursor[i] += 1
        return s

    annuli, gluings = [], []
    fixed_att: dict[str, str] = {}
    fixed_prongs: dict[str, int] = {}
    pa_prongs: dict[str, int] = {}
    fixed_adjacent_pa: set[int] = set()
    for e, (u, v) in enumerate(edges):
        su, sv = next_slot(u), next_slot(v)
        ku, kv = kinds[u], kinds[v]
        direct = {ku, kv} == {"fixed", "pa"} and rng.random() < 0.6
        if direct:
            f_slot, p_slot = (su, sv) if ku == "fixed" else (sv, su)
            prongs = rng.randint(1, 4)
            pa_prongs[p_slot] = prongs
            fixed_prongs[f_slot] = prongs
            fixed_att[f_slot] = p_slot
            gluings.append(Gluing(f_slot, pa_boundary=p_slot))
            fixed_adjacent_pa.add(v if kv == "pa" else u)
            continue
        aid = f"A{e}"
        if "fixed" in (ku, kv):
            kind, period = "twist", 1
        elif rng.random() < flip_weight:
            kind, period = "flip_twist", 1
        else:
            kind = rng.choice(("twist", "twist", "flip_twist"))
            period = rng.choice((1, 2)) if kind == "twist" else 2
        annuli.append(Annulus(aid, kind, rng.choice(("positive", "negative")), period))
        for side, (slot, owner) in enumerate(((su, u), (sv, v))):
            gluings.append(Gluing(slot, annulus=aid, side=side))
            if kinds[owner] == "fixed":
                fixed_att[slot] = aid
            if kinds[owner] == "pa":
                pa_prongs[slot] = rng.randint(1, 4)

    fixed, periodic, pas = [], [], []
    for i in range(k):
        if kinds[i] == "fixed":
            fixed.append(FixedComponent(cid[i], genera[i], tuple(
                FixedBoundary(s, fixed_att[s], rng.choice(("minus", "plus")), fixed_prongs.get(s))
                for s in slots[i]
            )))
        elif kinds[i] == "periodic":
            period = rng.choice((1, 1, 2, 3))
            count = rng.randint(0, 4) if period == 1 else 0
            trace = None
            if rng.random() < 0.5:
                trace = 0 if period > 1 else (1 - count + (0 if slots[i] else 1))
            periodic.append(PeriodicComponent(cid[i], genera[i], tuple(slots[i]), period, count, trace))
        else:
            classes = []
            for _ in range(rng.randint(0, 4)):
                kind = rng.choice(NIELSEN_KINDS)
                if kind in ("IIIa", "IIIc"):
                    pc = 1
                else:
                    pc = rng.randint(1, 3)
                idx = rng.choice((-1, -1, 1)) if kind != "IIIb" else -rng.randint(1, 3)
                prongs = rng.randint(1, 5) if kind in ("IIIb", "IIIc") else None
                abuts = kind == "IIId" and i in fixed_adjacent_pa and rng.random() < 0.5
                classes.append(NielsenClass(pc, idx, kind, prongs, abuts))
            pas.append(PAComponent(cid[i], genera[i], tuple(PABoundary(s, pa_prongs[s]) for s in slots[i]),
                                   tuple(classes)))
    try:
        return Decomposition(total, tuple(fixed), tuple(periodic), tuple(pas), tuple(annuli), tuple(gluings))
    except DecompositionError:
        return None
