"""
Solving slice QUBOs
===================

"""
from __future__ import annotations

import numpy as np

from pathslice import builtin_instance, build_distance_matrix
from pathslice.core import Segment
from pathslice.qubo import build_slice_qubo, decode_solution
from pathslice.solvers import (
    LoopbackTransport,
    RemoteSolver,
    SaParams,
    permutation_oracle,
    solve_exact,
    solve_sa,
)

inst = builtin_instance("djibouti38")
D = build_distance_matrix(inst)
seg = Segment((0, 5, 3, 1, 2, 4, 6))
q = build_slice_qubo(seg, D)

exact = solve_exact(q)
sa = solve_sa(q, SaParams(seed=3))
print("exact:", exact.energy, decode_solution(exact.bits, q, seg))
print("SA:   ", sa.energy, decode_solution(sa.bits, q, seg))
print("oracle:", permutation_oracle(seg, D))

# Effort matters: more sweeps per read find low energies more often.
for sweeps in (10, 100, 1000):
    energies = [solve_sa(q, SaParams(sweeps=sweeps, reads=1, seed=s)).energy for s in range(20)]
    print(f"sweeps={sweeps:5d} mean best energy {np.mean(energies):10.1f}")

# A remote sampler plugs in through a byte transport. The loopback one runs
# local annealing on the far side of the wire format.
remote = RemoteSolver(LoopbackTransport(SaParams(sweeps=500)), reads=8)
print("remote:", remote.solve(q).energy)
