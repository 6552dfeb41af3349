"""
Local search on ulysses16
=========================

Each iteration slices the tour, re-solves every slice and keeps strictly
shorter sub-paths.
"""
from __future__ import annotations

from pathslice import QlsConfig, builtin_instance, run_qls

inst = builtin_instance("ulysses16")
for seed in range(5):
    trace = run_qls(inst, QlsConfig(strategy="hybrid", k=2, iterations=100, seed=seed))
    improved = [(r.iteration, r.length) for r in trace.records if any(s.accepted for s in r.slices)]
    print(f"seed {seed}: {trace.initial.length:g} -> {trace.final.length:g}  improvements at {improved}")

# The trace records the size of every subproblem handed to the solver.
sizes = trace.subproblem_sizes
print("subproblem variables: min", min(sizes), "max", max(sizes), "vs", inst.n**2, "for the whole tour")
