"""
Knot Floer homology of small knots from grid diagrams
=====================================================

A grid diagram of size n has n! generators. We grade them, build the
rectangle differential over F2, take homology and strip off the
(n - 1) copies of the two-dimensional vector space that the tilde
version carries. What is left is the hat table.
"""

from floerfix import data_path, fixed_point_bound, knot_floer_ranks, read_grid, tilde_complex
from floerfix.grid import tilde_ranks

# the trefoil as the torus knot T(3,2) on a 5x5 grid
trefoil = read_grid(open(data_path("trefoil.grid")).read())
print(trefoil.to_text())

# 120 generators spread over bigradings (maslov, alexander)
tc = tilde_complex(trefoil)
print({k: len(v) for k, v in sorted(tc.members.items())})

# tilde homology has total rank 3 * 2^4
tilde = tilde_ranks(trefoil)
print("tilde total:", tilde.total())

# the hat table: one generator in each of Alexander gradings 1, 0, -1
hat = knot_floer_ranks(trefoil)
for a, m, r in hat.triples():
    print(f"a={a:>2}  m={m:>2}  rank {r}")

# top Alexander grading is the genus; rank 1 there means fibered,
# and the rank one step below bounds the fixed points of the monodromy
print(fixed_point_bound(hat))

# the figure-8 knot has r = 3, so at least two fixed points are forced
fig8 = read_grid(open(data_path("figure8.grid")).read())
print(fixed_point_bound(knot_floer_ranks(fig8)))

# T(5,2) is fibered of genus 2 with r = 1: no fixed points are forced
t52 = read_grid(open(data_path("t52.grid")).read())
print(fixed_point_bound(knot_floer_ranks(t52)))
