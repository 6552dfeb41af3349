"""Batch experiments: repeated local search runs, statistics and reports."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .qls import QlsConfig, run_qls
from .slicing import InvalidKError, Strategy
from .solvers import SaParams
from .tsplib import BUILTIN_INSTANCES, Instance, build_distance_matrix, builtin_instance, load_instance

__all__ = [
    "ExperimentSettings",
    "RunResult",
    "ExperimentReport",
    "resolve_instance",
    "run_experiment",
    "emit_report",
    "report_from_json",
    "size_stats",
]

CLUSTER_METHODS = ("kmeans", "anti-kmeans")


@dataclass(frozen=True)
class ExperimentSettings:
    instance: str
    strategy: Strategy = Strategy.HYBRID
    k: int = 2
    iterations: int = 100
    runs: int = 100
    seed: int = 0
    solver: str = "sa"
    sweeps: int = 1000
    reads: int = 10
    trace: bool = False
    parallel: bool = False
    shared_boundaries: bool = True

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.runs < 1:
            raise ValueError("runs must be >= 1")

    def qls_config(self, run: int) -> QlsConfig:
        return QlsConfig(
            strategy=self.strategy,
            k=self.k,
            iterations=self.iterations,
            solver=self.solver,
            sa_params=SaParams(sweeps=self.sweeps, reads=self.reads),
            seed=self.seed + run,
            shared_boundaries=self.shared_boundaries,
        )


@dataclass
class RunResult:
    run: int
    seed: int
    initial_length: float
    best_length: float
    subproblem_sizes: list[int]
    clustered_sizes: list[int]
    lengths: list[float] | None = None


def size_stats(sizes) -> dict | None:
    if len(sizes) == 0:
        return None
    arr = np.asarray(sizes, dtype=float)
    return {"mean": float(arr.mean()), "min": int(arr.min()), "max": int(arr.max()), "count": int(arr.size)}


@dataclass
class ExperimentReport:
    instance: str
    dimension: int
    strategy: str
    k: int
    iterations: int
    runs: int
    seed: int
    solver: str
    full_problem_variables: int
    best_lengths: list[float]
    initial_lengths: list[float]
    min: float
    mean: float
    std: float
    subproblem_size: dict | None
    clustered_subproblem_size: dict | None
    traces: list[list[float]] | None = field(default=None)

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.traces is None:
            del d["traces"]
        return d


def resolve_instance(spec: str) -> Instance:
    """A TSPLIB file path, or the name of a bundled instance."""
    path = Path(spec)
    if not path.exists() and spec in BUILTIN_INSTANCES:
        return builtin_instance(spec)
    return load_instance(path)


_WORKER_STATE: dict = {}


def _one_run(settings: ExperimentSettings, instance: Instance, matrix, run: int) -> RunResult:
    trace = run_qls(instance, settings.qls_config(run), matrix)
    lengths = trace.lengths
    best = min(lengths)
    if best != trace.final.length:
        raise RuntimeError("final length differs from best length; acceptance is not monotone")
    clustered = [s.num_vars for r in trace.records if r.method in CLUSTER_METHODS for s in r.slices]
    return RunResult(
        run=run,
        seed=settings.seed + run,
        initial_length=trace.initial.length,
        best_length=best,
        subproblem_sizes=trace.subproblem_sizes,
        clustered_sizes=clustered,
        lengths=lengths if settings.trace else None,
    )


def _worker_init(settings, instance):
    _WORKER_STATE["args"] = (settings, instance, build_distance_matrix(instance))


def _worker_run(run: int) -> RunResult:
    return _one_run(*_WORKER_STATE["args"], run)


def execute_runs(settings: ExperimentSettings, instance: Instance) -> list[RunResult]:
    if settings.parallel and settings.runs > 1:
        with ProcessPoolExecutor(initializer=_worker_init, initargs=(settings, instance)) as pool:
            return list(pool.map(_worker_run, range(settings.runs)))
    matrix = build_distance_matrix(instance)
    return [_one_run(settings, instance, matrix, r) for r in range(settings.runs)]


def build_report(settings: ExperimentSettings, instance: Instance, results: list[RunResult]) -> ExperimentReport:
    results = sorted(results, key=lambda r: r.run)
    best = np.array([r.best_length for r in results])
    sizes = [s for r in results for s in r.subproblem_sizes]
    clustered = [s for r in results for s in r.clustered_sizes]
    return ExperimentReport(
        instance=instance.name,
        dimension=instance.dimension,
        strategy=settings.strategy.value,
        k=settings.k,
        iterations=settings.iterations,
        runs=settings.runs,
        seed=settings.seed,
        solver=settings.solver,
        full_problem_variables=instance.dimension**2,
        best_lengths=[float(v) for v in best],
        initial_lengths=[float(r.initial_length) for r in results],
        min=float(best.min()),
        mean=float(best.mean()),
        std=float(best.std()),  # population standard deviation
        subproblem_size=size_stats(sizes),
        clustered_subproblem_size=size_stats(clustered),
        traces=[r.lengths for r in results] if settings.trace else None,
    )


def run_experiment(settings: ExperimentSettings, instance: Instance | None = None) -> ExperimentReport:
    """Run ``settings.runs`` independent searches with seeds seed, seed+1, ..."""
    if instance is None:
        instance = resolve_instance(settings.instance)
    # k-means alone allows k <= n; anything that may fall back on random slicing needs k <= n/2
    limit = instance.dimension if settings.strategy is Strategy.KMEANS else instance.dimension // 2
    if settings.k > limit:
        raise InvalidKError(f"k={settings.k} too large for {instance.dimension} cities with {settings.strategy.value}")
    return build_report(settings, instance, execute_runs(settings, instance))


_CSV_FIELDS = ("row", "run", "seed", "initial_length", "best_length", "min", "mean", "std")


def emit_report(report: ExperimentReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for i, (init, best) in enumerate(zip(report.initial_lengths, report.best_lengths)):
            writer.writerow(
                {"row": "run", "run": i, "seed": report.seed + i, "initial_length": repr(init), "best_length": repr(best)}
            )
        writer.writerow({"row": "summary", "min": repr(report.min), "mean": repr(report.mean), "std": repr(report.std)})
        return buf.getvalue()
    raise ValueError(f"unsupported report format {fmt!r}")


def report_from_json(text: str) -> ExperimentReport:
    return ExperimentReport(**json.loads(text))
