"""
The randomized invariant suite
==============================

Every identity the package relies on, checked against independent
oracles: sparse rank against dense elimination, closed-form surface
homology against triangulations, d o d = 0 on random grids, and the
Nielsen/Lefschetz/rank relations on random decompositions.
"""

from floerfix import selftest

for suite in selftest.run(seed=0, iters=200):
    print(f"{suite.name:<28} {suite.cases:>5} cases, {len(suite.failures)} failures")
