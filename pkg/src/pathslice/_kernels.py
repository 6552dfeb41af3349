"""Numba kernels for the QUBO solvers.

Energies here exclude the constant offset. ``J`` is the symmetric coupling
matrix (zero diagonal), so E(x) = h.x + x.J.x / 2 and flipping bit i
changes E by (1 - 2 x_i) * (h_i + (J x)_i).
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _splitmix(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, inline="always")
def _uniform(z):
    return (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, nogil=True)
def anneal(h, indptr, indices, data, betas, reads, seed):
    """Single-bit-flip Metropolis annealing, sequential sweeps.

    ``J`` is given in CSR form (``indptr``, ``indices``, ``data``). Returns
    (best_bits, best_energy): the lowest-energy state seen at the end of
    any sweep of any read.
    """
    n = h.shape[0]
    state = np.uint64(seed)
    best = np.zeros(n, dtype=np.int8)
    best_e = np.inf
    x = np.zeros(n, dtype=np.int8)
    field = np.empty(n)
    for _ in range(reads):
        for i in range(n):
            state, z = _splitmix(state)
            x[i] = 1 if _uniform(z) < 0.5 else 0
        for i in range(n):
            f = h[i]
            for t in range(indptr[i], indptr[i + 1]):
                if x[indices[t]]:
                    f += data[t]
            field[i] = f
        e = 0.0
        for i in range(n):
            if x[i]:
                e += h[i] + 0.5 * (field[i] - h[i])
        for s in range(betas.shape[0]):
            beta = betas[s]
            for i in range(n):
                delta = field[i] if x[i] == 0 else -field[i]
                accept = delta <= 0.0
                # exp(-36) is below the resolution of a 53-bit uniform draw
                if not accept and beta * delta < 36.0:
                    state, z = _splitmix(state)
                    accept = _uniform(z) < np.exp(-beta * delta)
                if accept:
                    sign = 1.0 if x[i] == 0 else -1.0
                    x[i] = 1 - x[i]
                    e += delta
                    for t in range(indptr[i], indptr[i + 1]):
                        field[indices[t]] += sign * data[t]
            if e < best_e:
                best_e = e
                for i in range(n):
                    best[i] = x[i]
    return best, best_e


@njit(cache=True, nogil=True)
def enumerate_min(h, J, tol):
    """Exhaustive minimum over all 2^n states in Gray-code order.

    Near-ties (within ``tol``) go to the lexicographically smaller bit
    vector. The running energy is refreshed from scratch every 1024 steps
    to bound floating-point drift.
    """
    n = h.shape[0]
    x = np.zeros(n, dtype=np.int8)
    field = h.copy()
    e = 0.0
    best = x.copy()
    best_e = 0.0
    total = np.int64(1) << n
    for k in range(1, total):
        # bit to flip is the lowest set bit of k
        b = 0
        kk = k
        while (kk & 1) == 0:
            kk >>= 1
            b += 1
        i = n - 1 - b
        delta = field[i] if x[i] == 0 else -field[i]
        sign = 1.0 if x[i] == 0 else -1.0
        x[i] = 1 - x[i]
        e += delta
        for j in range(n):
            field[j] += sign * J[j, i]
        if (k & 1023) == 0:
            e = 0.0
            for a in range(n):
                f = h[a]
                for c in range(n):
                    if x[c]:
                        f += J[a, c]
                field[a] = f
            for a in range(n):
                if x[a]:
                    e += h[a] + 0.5 * (field[a] - h[a])
        scale = max(1.0, abs(best_e))
        if e < best_e - tol * scale:
            best_e = e
            best[:] = x
        elif e <= best_e + tol * scale:
            smaller = False
            for a in range(n):
                if x[a] != best[a]:
                    smaller = x[a] < best[a]
                    break
            if smaller:
                best_e = min(e, best_e)
                best[:] = x
    return best, best_e
