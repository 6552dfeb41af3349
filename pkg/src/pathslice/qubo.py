"""QUBO model of a slice with fixed endpoints.

For a segment with interior cities c_0..c_{q-1} there are q*q binary
variables x[a, p] = 1 when interior city a sits at interior position p;
variable index is ``a * q + p``. The energy is

    A * sum_p (1 - sum_a x[a,p])^2 + A * sum_a (1 - sum_p x[a,p])^2
    + sum_a d(first, c_a) x[a,0] + sum_a d(c_a, last) x[a,q-1]
    + sum_{a != b} sum_p d(c_a, c_b) x[a,p] x[b,p+1]

so every one-hot assignment scores exactly the open path length
first -> interior order -> last.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Segment

__all__ = [
    "Qubo",
    "EmptyQuboError",
    "OneHotViolation",
    "build_slice_qubo",
    "default_penalty",
    "decode_solution",
    "encode_order",
    "qubo_to_text",
    "qubo_from_text",
]


class EmptyQuboError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Qubo:
    """``offset + linear @ x + x @ quadratic @ x`` with ``quadratic`` strictly upper triangular."""

    linear: np.ndarray
    quadratic: np.ndarray
    offset: float = 0.0
    cities: tuple[int, ...] = field(default=())

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float).reshape(-1)
        quad = np.array(self.quadratic, dtype=float)
        if quad.shape != (lin.size, lin.size):
            raise ValueError("quadratic must be num_vars x num_vars")
        # fold any lower-triangle or diagonal entries into the canonical form
        lin = lin + np.diag(quad)
        quad = np.triu(quad, 1) + np.tril(quad, -1).T
        lin.setflags(write=False)
        quad.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "quadratic", quad)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def num_vars(self) -> int:
        return self.linear.size

    @property
    def side(self) -> int:
        """Number of interior cities (= number of interior positions)."""
        return int(round(self.num_vars**0.5))

    def var_index(self, slot: int, position: int) -> int:
        return slot * self.side + position

    @property
    def var_map(self) -> dict[tuple[int, int], int]:
        """(interior city, 0-based interior position) -> variable index."""
        q = self.side
        return {(c, p): a * q + p for a, c in enumerate(self.cities) for p in range(q)}

    def energy(self, bits) -> float:
        x = np.asarray(bits, dtype=float).reshape(-1)
        if x.size != self.num_vars:
            raise ValueError(f"expected {self.num_vars} bits, got {x.size}")
        return float(self.offset + self.linear @ x + x @ self.quadratic @ x)

    def symmetric_matrix(self) -> np.ndarray:
        """Full symmetric coupling matrix J with energy = offset + h.x + x.J.x / 2."""
        return self.quadratic + self.quadratic.T


def default_penalty(segment: Segment, matrix: np.ndarray) -> float:
    """2 * (largest distance among the segment's cities) * (m - 1).

    Twice the longest possible open path, so any broken constraint (cost at
    least A) loses to every valid ordering. Falls back to 1 when all cities
    coincide.
    """
    idx = np.asarray(segment.cities, dtype=np.intp)
    dmax = float(matrix[np.ix_(idx, idx)].max())
    penalty = 2.0 * dmax * (segment.m - 1)
    return penalty if penalty > 0 else 1.0


def build_slice_qubo(segment: Segment, matrix: np.ndarray, penalty: float | None = None) -> Qubo:
    q = segment.interior_count
    if q < 1:
        raise EmptyQuboError("segment has no interior cities")
    if penalty is None:
        penalty = default_penalty(segment, matrix)
    if penalty <= 0:
        raise ValueError("penalty must be positive")
    interior = np.asarray(segment.interior, dtype=np.intp)
    n_vars = q * q
    lin = np.zeros(n_vars)
    quad = np.zeros((n_vars, n_vars))
    var = np.arange(n_vars).reshape(q, q)  # var[a, p]

    # each variable sits in one row and one column constraint:
    # (1 - s)^2 = 1 - s + 2 * sum_{i<j} x_i x_j for binary x
    lin -= 2.0 * penalty
    for a in range(q):
        for p in range(q):
            for p2 in range(p + 1, q):
                quad[var[a, p], var[a, p2]] += 2.0 * penalty
    for p in range(q):
        for a in range(q):
            for a2 in range(a + 1, q):
                quad[var[a, p], var[a2, p]] += 2.0 * penalty
    offset = 2.0 * q * penalty

    lin[var[:, 0]] += matrix[segment.first, interior]
    lin[var[:, q - 1]] += matrix[interior, segment.last]
    d = matrix[np.ix_(interior, interior)]
    for p in range(q - 1):
        for a in range(q):
            for b in range(q):
                if a != b:
                    i, j = var[a, p], var[b, p + 1]
                    quad[min(i, j), max(i, j)] += d[a, b]
    return Qubo(lin, quad, offset, tuple(int(c) for c in interior))


@dataclass(frozen=True)
class OneHotViolation:
    """First broken constraint: ``kind`` is "position" or "city"; ``index`` is 1-based."""

    kind: str
    index: int
    count: int

    def __str__(self):
        return f"{self.kind} {self.index} has {self.count} assignments"


def decode_solution(bits, qubo: Qubo, segment: Segment | None = None):
    """Interior city order for a one-hot assignment, else a OneHotViolation.

    Positions are checked before cities.
    """
    x = np.asarray(bits).reshape(-1)
    if x.size != qubo.num_vars:
        raise ValueError(f"expected {qubo.num_vars} bits, got {x.size}")
    q = qubo.side
    grid = (x.reshape(q, q) != 0).astype(int)  # grid[a, p]
    cities = qubo.cities if qubo.cities else (segment.interior if segment else tuple(range(q)))
    col = grid.sum(axis=0)
    for p in range(q):
        if col[p] != 1:
            return OneHotViolation("position", p + 1, int(col[p]))
    row = grid.sum(axis=1)
    for a in range(q):
        if row[a] != 1:
            return OneHotViolation("city", a + 1, int(row[a]))
    slot_at = np.argmax(grid, axis=0)
    return tuple(int(cities[a]) for a in slot_at)


def encode_order(order: Sequence[int], qubo: Qubo) -> np.ndarray:
    """Bit vector placing ``order[p]`` at interior position ``p``."""
    q = qubo.side
    slot = {c: a for a, c in enumerate(qubo.cities)}
    bits = np.zeros(qubo.num_vars, dtype=np.int8)
    for p, c in enumerate(order):
        bits[slot[c] * q + p] = 1
    return bits


def qubo_to_text(qubo: Qubo) -> str:
    """``offset <value>`` then ``i j coeff`` lines, i <= j, diagonal = linear terms."""
    lines = [f"offset {qubo.offset!r}"]
    n = qubo.num_vars
    for i in range(n):
        if qubo.linear[i] != 0:
            lines.append(f"{i} {i} {float(qubo.linear[i])!r}")
        for j in np.flatnonzero(qubo.quadratic[i, i + 1:]) + i + 1:
            lines.append(f"{i} {j} {float(qubo.quadratic[i, j])!r}")
    return "\n".join(lines) + "\n"


def qubo_from_text(text: str, num_vars: int | None = None) -> Qubo:
    offset = 0.0
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "offset":
            offset = float(parts[1])
            continue
        entries.append((int(parts[0]), int(parts[1]), float(parts[2])))
    if num_vars is None:
        num_vars = 1 + max((max(i, j) for i, j, _ in entries), default=-1)
    lin = np.zeros(num_vars)
    quad = np.zeros((num_vars, num_vars))
    for i, j, c in entries:
        if i == j:
            lin[i] += c
        else:
            quad[min(i, j), max(i, j)] += c
    return Qubo(lin, quad, offset)
