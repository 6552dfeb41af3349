"""Command line entry point: ``pathslice solve --instance ulysses16 ...``."""
from __future__ import annotations

import argparse
import sys

from .experiment import ExperimentSettings, emit_report, resolve_instance, run_experiment
from .slicing import InvalidKError, Strategy
from .tsplib import TsplibError

EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathslice", description="Path-slicing QUBO local search for the TSP")
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="run repeated local search experiments on one instance")
    solve.add_argument("--instance", required=True, help="TSPLIB .tsp path or bundled name (ulysses16, djibouti38, att48)")
    solve.add_argument("--strategy", choices=[s.value for s in Strategy], default="hybrid")
    solve.add_argument("--clusters", type=int, default=2, help="number of slices k")
    solve.add_argument("--iterations", type=int, default=100)
    solve.add_argument("--runs", type=int, default=100)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--solver", choices=["sa", "exact"], default="sa")
    solve.add_argument("--sweeps", type=int, default=1000)
    solve.add_argument("--reads", type=int, default=10)
    solve.add_argument("--output", help="report path (default: stdout)")
    solve.add_argument("--format", choices=["json", "csv"], default="json")
    solve.add_argument("--trace", action="store_true", help="include per-iteration tour lengths")
    solve.add_argument("--parallel", action="store_true", help="spread runs over worker processes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = ExperimentSettings(
            instance=args.instance,
            strategy=args.strategy,
            k=args.clusters,
            iterations=args.iterations,
            runs=args.runs,
            seed=args.seed,
            solver=args.solver,
            sweeps=args.sweeps,
            reads=args.reads,
            trace=args.trace,
            parallel=args.parallel,
        )
        # fail fast on bad settings before any search runs
        settings.qls_config(0)
    except ValueError as exc:
        print(f"pathslice: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        instance = resolve_instance(args.instance)
    except (OSError, TsplibError) as exc:
        print(f"pathslice: cannot read instance: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        report = run_experiment(settings, instance)
    except (InvalidKError, ValueError) as exc:
        print(f"pathslice: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = emit_report(report, args.format)
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"pathslice: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
