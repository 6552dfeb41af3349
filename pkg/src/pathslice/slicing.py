"""Path slicing: cut the current tour into contiguous slices.

Tour positions are laid out on the unit circle with arc lengths
proportional to the edge lengths along the tour. Clustering those points
gives slices that follow the tour. Five strategies are available: k-means
(clusters are slices), anti-k-means (centroids are cut points), random
(jittered, randomly rotated equal spacing) and the two hybrids that
alternate random slicing with one of the clustered ones, starting with
random.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Segment, Tour

__all__ = [
    "Strategy",
    "CircleEmbedding",
    "SlicePlan",
    "InvalidKError",
    "ZeroCircumferenceError",
    "embed_on_circle",
    "kmeans_cluster",
    "kmeans_slices",
    "anti_kmeans_slices",
    "random_slices",
    "plan_for_iteration",
]

TWO_PI = 2.0 * math.pi
KMEANS_MAX_ITER = 100


class InvalidKError(ValueError):
    pass


class ZeroCircumferenceError(ValueError):
    pass


class Strategy(str, enum.Enum):
    KMEANS = "kmeans"
    ANTI_KMEANS = "anti-kmeans"
    RANDOM = "random"
    HYBRID = "hybrid"
    HYBRID_ANTI = "hybrid-anti"


@dataclass(frozen=True, eq=False)
class CircleEmbedding:
    edge_lengths: np.ndarray  # d_i, edge from position i to i+1
    deltas: np.ndarray  # angular share of each edge
    angles: np.ndarray  # one per tour position, angles[0] == 0
    points: np.ndarray  # (n, 2) on the unit circle
    circumference: float

    @property
    def n(self) -> int:
        return len(self.angles)


@dataclass(frozen=True)
class SlicePlan:
    """Sorted, distinct cut positions on a cyclic tour of length ``n``.

    Slice ``j`` starts at ``cuts[j]`` and runs to the next cut. With shared
    boundaries the next cut's city closes the slice, so neighbouring slices
    share one fixed city. Otherwise it stops one position earlier and the
    edge between slices is left alone.
    """

    cuts: tuple[int, ...]
    n: int
    method: str = ""

    def __post_init__(self):
        cuts = tuple(int(c) for c in self.cuts)
        if len(cuts) < 2:
            raise ValueError("a plan needs at least 2 cuts")
        if list(cuts) != sorted(set(cuts)):
            raise ValueError(f"cuts must be strictly increasing: {cuts}")
        if cuts[0] < 0 or cuts[-1] >= self.n:
            raise ValueError(f"cuts outside 0..{self.n - 1}: {cuts}")
        object.__setattr__(self, "cuts", cuts)

    @property
    def k(self) -> int:
        return len(self.cuts)

    def gaps(self) -> list[int]:
        c = self.cuts
        return [((c[(j + 1) % self.k] - c[j]) % self.n) or self.n for j in range(self.k)]

    def slice_positions(self, shared_boundaries: bool = True) -> list[list[int]]:
        extra = 1 if shared_boundaries else 0
        return [
            [(start + i) % self.n for i in range(gap + extra)]
            for start, gap in zip(self.cuts, self.gaps())
        ]

    def segments(self, tour: Tour, shared_boundaries: bool = True) -> list[Segment]:
        """Segments of ``tour``; slices with fewer than 2 cities are dropped."""
        if len(tour.order) != self.n:
            raise ValueError("plan and tour sizes differ")
        out = []
        for positions in self.slice_positions(shared_boundaries):
            if len(positions) >= 2:
                out.append(Segment(tuple(tour.order[p] for p in positions), positions[0]))
        return out


def embed_on_circle(tour: Tour, matrix: np.ndarray) -> CircleEmbedding:
    order = np.asarray(tour.order, dtype=np.intp)
    d = matrix[order, np.roll(order, -1)].astype(float)
    if not np.all(np.isfinite(d)):
        raise ValueError("non-finite edge length along the tour")
    circumference = float(d.sum())
    if circumference <= 0.0:
        raise ZeroCircumferenceError("tour has zero total length")
    deltas = TWO_PI * d / circumference
    angles = np.concatenate(([0.0], np.cumsum(deltas)[:-1]))
    points = np.column_stack((np.cos(angles), np.sin(angles)))
    return CircleEmbedding(d, deltas, angles, points, circumference)


def _check_k(k: int, limit: int, what: str):
    if k < 2 or k > limit:
        raise InvalidKError(f"k={k} outside 2..{limit} ({what})")


def kmeans_cluster(points, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's algorithm with k-means++ seeding.

    Stops when the assignment no longer changes or after 100 rounds.
    Returns ``(centroids, labels)``.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    _check_k(k, n, "k-means needs k <= number of points")

    chosen = [int(rng.integers(n))]
    d2 = ((pts - pts[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(rest))
        chosen.append(nxt)
        d2 = np.minimum(d2, ((pts - pts[nxt]) ** 2).sum(axis=1))
    centroids = pts[chosen].copy()

    labels = None
    for _ in range(KMEANS_MAX_ITER):
        dist = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(dist, axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            members = pts[labels == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    return centroids, labels


def _circular_gap(a, b):
    diff = np.abs(np.asarray(a) - np.asarray(b)) % TWO_PI
    return np.minimum(diff, TWO_PI - diff)


def _fill_cuts(cuts: set[int], n: int, k: int) -> tuple[int, ...]:
    # split the longest arc at its midpoint until there are k cuts
    while len(cuts) < k:
        c = sorted(cuts)
        gaps = [((c[(j + 1) % len(c)] - c[j]) % n) or n for j in range(len(c))]
        j = int(np.argmax(gaps))
        cuts.add((c[j] + gaps[j] // 2) % n)
    return tuple(sorted(cuts))


def kmeans_slices(embedding: CircleEmbedding, k: int, rng: np.random.Generator) -> SlicePlan:
    """One slice per cluster.

    Positions are re-assigned to the centroid nearest in angle, which makes
    every cluster a contiguous arc of the tour. Cuts sit where the label
    changes.
    """
    n = embedding.n
    centroids, _ = kmeans_cluster(embedding.points, k, rng)
    phi = np.mod(np.arctan2(centroids[:, 1], centroids[:, 0]), TWO_PI)
    labels = np.argmin(_circular_gap(embedding.angles[:, None], phi[None, :]), axis=1)
    cuts = {p for p in range(n) if labels[p] != labels[p - 1]}
    if not cuts:
        cuts = {0}
    return SlicePlan(_fill_cuts(cuts, n, k), n, "kmeans")


def anti_kmeans_slices(embedding: CircleEmbedding, k: int, rng: np.random.Generator) -> SlicePlan:
    """Cut the tour at the positions nearest to each centroid's angle."""
    n = embedding.n
    centroids, _ = kmeans_cluster(embedding.points, k, rng)
    phi = np.mod(np.arctan2(centroids[:, 1], centroids[:, 0]), TWO_PI)
    nearest = np.argmin(_circular_gap(embedding.angles[None, :], phi[:, None]), axis=1)
    cuts: list[int] = []
    duplicates = 0
    for p in nearest:
        if int(p) in cuts:
            duplicates += 1
        else:
            cuts.append(int(p))
    if len(cuts) < 2:
        return random_slices(n, k, rng)
    if duplicates:
        free = np.setdiff1d(np.arange(n), cuts)
        cuts.extend(int(p) for p in rng.choice(free, size=duplicates, replace=False))
    return SlicePlan(tuple(sorted(cuts)), n, "anti-kmeans")


def random_slices(n: int, k: int, rng: np.random.Generator) -> SlicePlan:
    """Jittered equally spaced cuts.

    The pattern floor(j n / k) is rotated by a uniform offset, then each cut
    moves by its own uniform integer in [-h, h] with h = (n - k) // (2k),
    which keeps neighbouring windows apart (h = 0 when n = 2k). A collision
    would probe forward to the next free position.
    """
    _check_k(k, n // 2, "random slicing needs k <= n/2")
    h = (n - k) // (2 * k)
    rotation = int(rng.integers(n))
    shifts = rng.integers(-h, h + 1, size=k)
    taken: list[int] = []
    for j in range(k):
        pos = (rotation + j * n // k + int(shifts[j])) % n
        while pos in taken:
            pos = (pos + 1) % n
        taken.append(pos)
    return SlicePlan(tuple(sorted(taken)), n, "random")


def plan_for_iteration(
    strategy: Strategy | str,
    iteration: int,
    tour: Tour,
    matrix: np.ndarray,
    k: int,
    rng: np.random.Generator,
) -> SlicePlan:
    strategy = Strategy(strategy)
    if iteration < 0:
        raise ValueError("iteration must be >= 0")
    if strategy in (Strategy.HYBRID, Strategy.HYBRID_ANTI):
        if iteration % 2 == 0:
            return random_slices(len(tour.order), k, rng)
        strategy = Strategy.KMEANS if strategy is Strategy.HYBRID else Strategy.ANTI_KMEANS
    if strategy is Strategy.RANDOM:
        return random_slices(len(tour.order), k, rng)
    embedding = embed_on_circle(tour, matrix)
    if strategy is Strategy.KMEANS:
        return kmeans_slices(embedding, k, rng)
    return anti_kmeans_slices(embedding, k, rng)
