"""
Batch experiments and reports
=============================

The same machinery sits behind ``pathslice solve``.
"""
from __future__ import annotations

from pathslice.experiment import ExperimentSettings, emit_report, run_experiment

settings = ExperimentSettings("att48", strategy="hybrid", k=6, iterations=30, runs=4, seed=0)
report = run_experiment(settings)
print(f"min {report.min:g}  mean {report.mean:.1f}  std {report.std:.1f}  (optimum 10628)")
print("full problem variables:", report.full_problem_variables)
print("subproblem sizes:", report.subproblem_size)
print(emit_report(report, "csv"))

# Equivalent command line:
#   pathslice solve --instance att48 --strategy hybrid --clusters 6 \
#       --iterations 30 --runs 4 --format csv
