"""
Loading TSPLIB instances and building a starting tour
======================================================

"""
from __future__ import annotations

import numpy as np

from pathslice import builtin_instance, build_distance_matrix, convex_hull_insertion
from pathslice.construction import convex_hull

# Three instances ship with the package. Each uses a different distance rule.
for name in ("ulysses16", "djibouti38", "att48"):
    inst = builtin_instance(name)
    print(f"{name:11s} n={inst.n:3d} metric={inst.metric.value}")

# The distance matrix is a read-only numpy array of integer-valued floats.
inst = builtin_instance("ulysses16")
D = build_distance_matrix(inst)
print(D[:4, :4])

# The hull of the city coordinates seeds the tour...
hull = convex_hull(inst.coords)
print("hull:", hull)

# ...and the remaining cities are inserted by the cost ratio rule.
tour = convex_hull_insertion(inst, D)
print("initial tour:", tour.order)
print("length:", tour.length, "(optimum 6859)")

# A random permutation is much worse.
order = np.random.default_rng(0).permutation(inst.n)
print("random tour length:", D[order, np.roll(order, -1)].sum())
