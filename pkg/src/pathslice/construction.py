"""Initial tour construction: convex hull insertion."""
from __future__ import annotations

import numpy as np

from .core import Tour
from .tsplib import Instance

__all__ = [
    "DegenerateHullError",
    "convex_hull",
    "convex_hull_insertion",
    "nearest_neighbor_tour",
]


class DegenerateHullError(ValueError):
    pass


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(coords) -> list[int]:
    """Indices of the hull vertices in counter-clockwise order.

    Monotone chain; points lying on a hull edge are not vertices. Raises
    DegenerateHullError when every point is collinear.
    """
    pts = np.asarray(coords, dtype=float)
    if len(pts) < 3:
        raise DegenerateHullError("need at least 3 points")
    order = sorted(range(len(pts)), key=lambda i: (pts[i, 0], pts[i, 1], i))

    def chain(indices):
        out: list[int] = []
        for i in indices:
            while len(out) >= 2 and _cross(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            # coincident points would otherwise enter the hull twice
            if out and pts[out[-1]][0] == pts[i][0] and pts[out[-1]][1] == pts[i][1]:
                continue
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHullError("all points are collinear")
    return hull


def nearest_neighbor_tour(matrix: np.ndarray, start: int = 0) -> Tour:
    n = len(matrix)
    visited = np.zeros(n, dtype=bool)
    order = [start]
    visited[start] = True
    for _ in range(n - 1):
        row = np.where(visited, np.inf, matrix[order[-1]])
        nxt = int(np.argmin(row))
        order.append(nxt)
        visited[nxt] = True
    return Tour.from_order(order, matrix)


def convex_hull_insertion(instance: Instance, matrix: np.ndarray, fallback: bool = True) -> Tour:
    """Build a tour from the convex hull by repeated ratio insertion.

    Each round, every free city is paired with its cheapest tour edge
    (i, j) by d(i,c) + d(c,j) - d(i,j); the pair with the smallest
    (d(i,c) + d(c,j)) / d(i,j) is inserted. Ties go to the lower
    (ratio, cost, city index). Collinear instances fall back to a
    nearest-neighbor tour from city 0 unless ``fallback`` is False.
    """
    try:
        tour = convex_hull(instance.coords)
    except DegenerateHullError:
        if not fallback:
            raise
        return nearest_neighbor_tour(matrix, 0)

    n = instance.dimension
    in_tour = np.zeros(n, dtype=bool)
    in_tour[tour] = True
    free = np.flatnonzero(~in_tour)

    while free.size:
        t = np.asarray(tour)
        a, b = t, np.roll(t, -1)
        base = matrix[a, b]
        detour = matrix[np.ix_(free, a)] + matrix[np.ix_(free, b)]
        cost = detour - base
        # argmin keeps the first edge in tour order among equal costs
        edge = np.argmin(cost, axis=1)
        rows = np.arange(free.size)
        best_cost = cost[rows, edge]
        num = detour[rows, edge]
        den = base[edge]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 1.0))
        pick = np.lexsort((free, best_cost, ratio))[0]
        city = int(free[pick])
        tour.insert(int(edge[pick]) + 1, city)
        free = np.delete(free, pick)

    return Tour.from_order(tour, matrix)
