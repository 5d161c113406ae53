"""Randomized invariant suite behind ``floerfix selftest``."""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import grid, mapclass
from .f2_linalg import ComplexError, SparseBoolMatrix, rank
from .surfaces import SurfacePiece, rel_betti, simplicial_oracle


def dense_rank(a: np.ndarray) -> int:
    """Row reduction on a dense 0/1 array; independent of the sparse reducer."""
    a = (np.asarray(a, dtype=np.uint8) % 2).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        a[[r, p]] = a[[p, r]]
        below = np.nonzero(a[:, c])[0]
        below = below[below != r]
        a[below] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)


def _rng(seed: int, suite: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{i}")


def _case_f2(seed: int, i: int) -> str | None:
    rng = _rng(seed, "f2", i)
    rows, cols = rng.randint(1, 90), rng.randint(1, 90)
    density = rng.choice((0.02, 0.05, 0.2, 0.5))
    nprng = np.random.default_rng(rng.getrandbits(32))
    a = (nprng.random((rows, cols)) < density).astype(np.uint8)
    got = rank(SparseBoolMatrix.from_dense(a))
    want = dense_rank(a)
    if got != want:
        return f"f2 seed={seed} case={i}: rank {got} != dense {want} on {rows}x{cols}"
    return None


def _case_grid(seed: int, i: int) -> str | None:
    rng = _rng(seed, "grid", i)
    g = grid.random_grid(rng, rng.randint(2, 6))
    try:
        grid.tilde_complex(g, check=True)
    except (ComplexError, grid.GridError) as exc:
        return f"grid seed={seed} case={i}: {g.x_marks}/{g.o_marks}: {exc}"
    return None


def _case_decomposition(seed: int, i: int) -> str | None:
    sub = _rng(seed, "decomposition", i).getrandbits(63)
    d = mapclass.random_decomposition(sub, 6)
    report = mapclass.verify_bound(d, strict=False)
    if not report.ok:
        failed = [k for k, ok in report.checks.items() if not ok]
        return f"decomposition seed={seed} case={i} (generator seed {sub}): {', '.join(failed)}"
    return None


def _surface_sweep() -> SuiteResult:
    res = SuiteResult("surface_oracle")
    for g in range(4):
        for b in range(5):
            for c in range(b + 1):
                s = SurfacePiece(g, b, c)
                res.cases += 1
                got, want = rel_betti(s), simplicial_oracle(s)
                if got != want:
                    res.failures.append(f"surface g={g} b={b} c={c}: {got} != oracle {want}")
    return res


def run(seed: int = 0, iters: int = 1000, threads: int = 1) -> list[SuiteResult]:
    """Run every suite; the outcome depends only on ``seed`` and ``iters``."""
    plan = [
        ("f2_rank_vs_dense", _case_f2, math.ceil(iters / 20)),
        ("grid_d_squared", _case_grid, math.ceil(iters / 10)),
        ("decomposition_identities", _case_decomposition, iters),
    ]
    results = []
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for name, fn, count in plan:
            outcomes = list(pool.map(lambda i, fn=fn: fn(seed, i), range(count)))
            results.append(SuiteResult(name, count, [o for o in outcomes if o]))
    results.insert(1, _surface_sweep() if iters > 0 else SuiteResult("surface_oracle"))
    return results
