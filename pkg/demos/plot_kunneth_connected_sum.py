"""
Connected sums two ways
=======================

The hat table of a connected sum is the convolution of the two tables.
Here we check that against a direct computation on a 9x9 grid, which
is also the heaviest computation in the package.
"""

import time

from floerfix import connected_sum, data_path, knot_floer_ranks, kunneth_convolve, read_grid

trefoil = read_grid(open(data_path("trefoil.grid")).read())
hat = knot_floer_ranks(trefoil)

product = kunneth_convolve(hat, hat)
print("convolution:", dict(product.alexander_totals()))

# the two 5x5 grids spliced at a corner give a 9x9 grid
square = connected_sum(trefoil, trefoil)
print(square.to_text())

t0 = time.perf_counter()
direct = knot_floer_ranks(square)
print(f"9! generators in {time.perf_counter() - t0:.1f} s")
print("direct == convolution:", direct == product)
