"""Local search driver: slice the tour, re-solve each slice as a QUBO, keep improvements."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .construction import convex_hull_insertion
from .core import Segment, Tour, splice_segment, tour_length
from .qubo import OneHotViolation, build_slice_qubo, decode_solution, default_penalty
from .slicing import Strategy, plan_for_iteration
from .solvers import ExactSolver, SaParams, SimulatedAnnealingSolver, Solver
from .tsplib import Instance, build_distance_matrix

__all__ = [
    "QlsConfig",
    "SliceRecord",
    "IterationRecord",
    "QlsTrace",
    "make_solver",
    "improve_slice",
    "run_qls",
]


@dataclass(frozen=True)
class QlsConfig:
    strategy: Strategy = Strategy.HYBRID
    k: int = 2
    iterations: int = 100
    solver: str = "sa"  # "sa" or "exact"
    sa_params: SaParams = SaParams()
    seed: int = 0
    parallel_slices: bool = False
    shared_boundaries: bool = True
    penalty_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.solver not in ("sa", "exact"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.penalty_scale <= 0:
            raise ValueError("penalty_scale must be positive")


@dataclass(frozen=True)
class SliceRecord:
    start: int
    num_vars: int
    accepted: bool


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    length: float
    method: str
    slices: tuple[SliceRecord, ...]


@dataclass
class QlsTrace:
    initial: Tour
    records: list[IterationRecord] = field(default_factory=list)
    final: Tour | None = None

    @property
    def lengths(self) -> list[float]:
        """Tour length before the first iteration and after each one."""
        return [self.initial.length] + [r.length for r in self.records]

    @property
    def subproblem_sizes(self) -> list[int]:
        return [s.num_vars for r in self.records for s in r.slices]


def make_solver(config: QlsConfig) -> Solver:
    if config.solver == "exact":
        return ExactSolver()
    return SimulatedAnnealingSolver(config.sa_params)


def _slice_seed(master: int, iteration: int, index: int) -> int:
    return int(np.random.SeedSequence([master, iteration, index, 1]).generate_state(1)[0])


def _propose(segment: Segment, solver: Solver, matrix, seed: int, penalty_scale: float = 1.0):
    """Solve one slice; returns (num_vars, interior order or None)."""
    penalty = default_penalty(segment, matrix) * penalty_scale
    qubo = build_slice_qubo(segment, matrix, penalty)
    try:
        result = solver.solve(qubo, seed)
    except Exception:  # a failing backend only costs this slice
        return qubo.num_vars, None
    order = decode_solution(result.bits, qubo, segment)
    if isinstance(order, OneHotViolation):
        return qubo.num_vars, None
    return qubo.num_vars, order


def _accept(tour: Tour, segment: Segment, order, matrix) -> tuple[bool, Tour]:
    if order is None:
        return False, tour
    # the segment was cut from the iteration-start tour; its interior is untouched since
    old = segment.open_length(matrix)
    new = tour_length((segment.first, *order, segment.last), matrix, closed=False)
    if new < old:
        return True, splice_segment(tour, segment, order, matrix)
    return False, tour


def improve_slice(
    tour: Tour, segment: Segment, solver: Solver, matrix: np.ndarray, seed: int = 0
) -> tuple[bool, Tour]:
    """Re-solve one slice and splice the result in only if it is strictly shorter."""
    if segment.interior_count < 1:
        return False, tour
    _, order = _propose(segment, solver, matrix, seed)
    return _accept(tour, segment, order, matrix)


def run_qls(
    instance: Instance,
    config: QlsConfig,
    matrix: np.ndarray | None = None,
    initial: Tour | None = None,
) -> QlsTrace:
    if matrix is None:
        matrix = build_distance_matrix(instance)
    tour = initial if initial is not None else convex_hull_insertion(instance, matrix)
    solver = make_solver(config)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))
    trace = QlsTrace(initial=tour)
    pool = ThreadPoolExecutor() if config.parallel_slices else None
    try:
        for it in range(config.iterations):
            plan = plan_for_iteration(config.strategy, it, tour, matrix, config.k, rng)
            segments = [
                s for s in plan.segments(tour, config.shared_boundaries) if s.interior_count >= 1
            ]
            seeds = [_slice_seed(config.seed, it, j) for j in range(len(segments))]
            args = [(s, solver, matrix, sd, config.penalty_scale) for s, sd in zip(segments, seeds)]
            if pool is not None:
                proposals = list(pool.map(lambda a: _propose(*a), args))
            else:
                proposals = [_propose(*a) for a in args]
            records = []
            for segment, (num_vars, order) in zip(segments, proposals):
                accepted, tour = _accept(tour, segment, order, matrix)
                records.append(SliceRecord(segment.start, num_vars, accepted))
            trace.records.append(IterationRecord(it, tour.length, plan.method, tuple(records)))
    finally:
        if pool is not None:
            pool.shutdown()
    trace.final = tour
    return trace
