"""
Slicing a tour on the circle
============================

The tour is laid out on the unit circle with arc lengths proportional to
its edges. Clustering those points gives contiguous slices.
"""
from __future__ import annotations

import numpy as np

from pathslice import builtin_instance, build_distance_matrix, convex_hull_insertion
from pathslice.slicing import anti_kmeans_slices, embed_on_circle, kmeans_slices, random_slices

inst = builtin_instance("att48")
D = build_distance_matrix(inst)
tour = convex_hull_insertion(inst, D)

emb = embed_on_circle(tour, D)
print("first angles:", np.round(emb.angles[:6], 3))
print("sum of arc shares:", emb.deltas.sum(), "= 2 pi")

rng = np.random.default_rng(1)
for plan in (
    kmeans_slices(emb, 6, rng),
    anti_kmeans_slices(emb, 6, rng),
    random_slices(inst.n, 6, rng),
):
    print(f"{plan.method:12s} cuts={plan.cuts} slice lengths={plan.gaps()}")

# k-means slices follow dense stretches of the tour; anti-k-means puts the
# cuts in the middle of those stretches instead.
plan = kmeans_slices(emb, 6, rng)
for seg in plan.segments(tour):
    print(f"slice at {seg.start:2d}: {seg.m:2d} cities, {seg.interior_count ** 2:3d} QUBO variables")
