"""Tours, segments and length bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Tour",
    "Segment",
    "TourViolation",
    "InteriorMismatchError",
    "tour_length",
    "validate_tour",
    "splice_segment",
]

LENGTH_RTOL = 1e-6


class InteriorMismatchError(ValueError):
    pass


def tour_length(order: Sequence[int], matrix: np.ndarray, closed: bool = True) -> float:
    """Sum of edge weights along ``order``; ``closed`` adds the wrap-around edge."""
    idx = np.asarray(order, dtype=np.intp)
    if idx.size == 0:
        raise ValueError("empty order")
    total = float(matrix[idx[:-1], idx[1:]].sum())
    if closed and idx.size > 1:
        total += float(matrix[idx[-1], idx[0]])
    return total


@dataclass(frozen=True)
class Tour:
    """A closed tour: ``order[-1]`` connects back to ``order[0]``."""

    order: tuple[int, ...]
    length: float

    @classmethod
    def from_order(cls, order: Sequence[int], matrix: np.ndarray) -> Tour:
        order = tuple(int(c) for c in order)
        return cls(order, tour_length(order, matrix, closed=True))

    def __len__(self):
        return len(self.order)

    def rotated(self, start_city: int = 0) -> Tour:
        i = self.order.index(start_city)
        return Tour(self.order[i:] + self.order[:i], self.length)


@dataclass(frozen=True)
class Segment:
    """Contiguous run of ``m`` tour positions starting at position ``start``.

    The first and last cities stay fixed; only the interior may be reordered.
    """

    cities: tuple[int, ...]
    start: int = 0

    def __post_init__(self):
        if len(self.cities) < 2:
            raise ValueError("a segment needs at least 2 cities")
        if self.cities[0] == self.cities[-1]:
            raise ValueError("segment endpoints must be distinct")
        if len(set(self.cities)) != len(self.cities):
            raise ValueError("segment repeats a city")

    @property
    def m(self) -> int:
        return len(self.cities)

    @property
    def first(self) -> int:
        return self.cities[0]

    @property
    def last(self) -> int:
        return self.cities[-1]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.cities[1:-1]

    @property
    def interior_count(self) -> int:
        return len(self.cities) - 2

    def open_length(self, matrix: np.ndarray) -> float:
        return tour_length(self.cities, matrix, closed=False)


@dataclass(frozen=True)
class TourViolation:
    kind: str  # "duplicate-city", "missing-city", "bad-city", "stale-length"
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def validate_tour(tour: Tour, n: int, matrix: np.ndarray | None = None) -> TourViolation | None:
    """Return None for a valid tour, else the first violation found.

    The cached length is only checked when ``matrix`` is given.
    """
    seen = set()
    for city in tour.order:
        if not 0 <= city < n:
            return TourViolation("bad-city", f"city {city} outside 0..{n - 1}")
        if city in seen:
            return TourViolation("duplicate-city", f"city {city} appears more than once")
        seen.add(city)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        return TourViolation("missing-city", f"cities {missing} not visited")
    if matrix is not None:
        actual = tour_length(tour.order, matrix)
        if abs(actual - tour.length) > LENGTH_RTOL * max(abs(actual), 1.0):
            return TourViolation("stale-length", f"cached {tour.length}, actual {actual}")
    return None


def splice_segment(
    tour: Tour, segment: Segment, new_interior: Sequence[int], matrix: np.ndarray
) -> Tour:
    """Replace the segment's interior with ``new_interior``.

    The length is updated from the two open segment lengths rather than
    recomputed over the whole tour.
    """
    new_interior = tuple(int(c) for c in new_interior)
    if sorted(new_interior) != sorted(segment.interior):
        raise InteriorMismatchError(
            f"{new_interior} is not a permutation of the interior {segment.interior}"
        )
    n = len(tour.order)
    if segment.m > n:
        raise ValueError("segment longer than the tour")
    for offset, city in enumerate(segment.cities):
        if tour.order[(segment.start + offset) % n] != city:
            raise ValueError("segment does not match the tour at its start position")
    if new_interior == segment.interior:
        return tour

    order = list(tour.order)
    for offset, city in enumerate(new_interior, start=1):
        order[(segment.start + offset) % n] = city
    new_cities = (segment.first, *new_interior, segment.last)
    delta = tour_length(new_cities, matrix, closed=False) - segment.open_length(matrix)
    return Tour(tuple(order), tour.length + delta)
