import itertools

import numpy as np
import pytest

from pathslice.tsplib import Instance, Metric, build_distance_matrix, builtin_instance

# Published optimal tours, 1-based as in TSPLIB .opt.tour files. The
# djibouti38 tour was certified optimal (6656) with an exact subtour-
# elimination ILP on the bundled coordinates.
OPTIMAL_TOURS = {
    "ulysses16": [1, 14, 13, 12, 7, 6, 15, 5, 11, 9, 10, 16, 3, 2, 4, 8],
    "att48": [
        1, 8, 38, 31, 44, 18, 7, 28, 6, 37, 19, 27, 17, 43, 30, 36, 46, 33, 20, 47, 21, 32, 39, 48,
        5, 42, 24, 10, 45, 35, 4, 26, 2, 29, 34, 41, 16, 22, 3, 23, 14, 25, 13, 11, 12, 15, 40, 9,
    ],
    "djibouti38": [
        1, 2, 4, 3, 5, 6, 7, 8, 9, 12, 11, 19, 18, 17, 16, 13, 15, 20, 23, 26, 25, 22, 24, 28, 27,
        31, 36, 34, 33, 38, 37, 35, 32, 30, 29, 21, 14, 10,
    ],
}
OPTIMAL_LENGTHS = {"ulysses16": 6859, "djibouti38": 6656, "att48": 10628}

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundled_instances():
    return {name: builtin_instance(name) for name in OPTIMAL_LENGTHS}


@pytest.fixture(scope="session")
def bundled_matrices(bundled_instances):
    return {name: build_distance_matrix(inst) for name, inst in bundled_instances.items()}


def random_euc_instance(rng, n, scale=1000.0, name="random"):
    return Instance(name, n, rng.uniform(0, scale, size=(n, 2)), Metric.EUC_2D)


def random_slice_setup(rng, interior, scale=1000.0):
    """A random EUC_2D instance holding one segment with ``interior`` interior cities."""
    from pathslice.core import Segment

    m = interior + 2
    inst = random_euc_instance(rng, max(m, 3), scale)
    matrix = build_distance_matrix(inst)
    cities = tuple(int(c) for c in rng.permutation(inst.dimension)[:m])
    return Segment(cities), matrix


def held_karp(matrix):
    """Optimal closed tour length by dynamic programming (small n only)."""
    n = len(matrix)
    full = 1 << (n - 1)
    dp = np.full((full, n - 1), np.inf)
    for j in range(n - 1):
        dp[1 << j, j] = matrix[n - 1, j]
    for mask in range(1, full):
        for j in range(n - 1):
            if not mask & (1 << j) or not np.isfinite(dp[mask, j]):
                continue
            for t in range(n - 1):
                if mask & (1 << t):
                    continue
                nm = mask | (1 << t)
                cand = dp[mask, j] + matrix[j, t]
                if cand < dp[nm, t]:
                    dp[nm, t] = cand
    return float(min(dp[full - 1, j] + matrix[j, n - 1] for j in range(n - 1)))


def brute_force_tour(matrix):
    n = len(matrix)
    best = np.inf
    for perm in itertools.permutations(range(1, n)):
        order = (0, *perm)
        length = sum(matrix[order[i], order[(i + 1) % n]] for i in range(n))
        best = min(best, length)
    return float(best)
