"""
A slice as a QUBO
=================

With both endpoints fixed, a slice of m cities needs (m-2)^2 binary
variables: x[a, p] = 1 puts interior city a at interior position p.
"""
from __future__ import annotations

import itertools

from pathslice import builtin_instance, build_distance_matrix
from pathslice.core import Segment
from pathslice.qubo import build_slice_qubo, decode_solution, default_penalty, encode_order, qubo_to_text

inst = builtin_instance("ulysses16")
D = build_distance_matrix(inst)
seg = Segment((0, 13, 12, 11, 6))
q = build_slice_qubo(seg, D)
print("variables:", q.num_vars, "penalty:", default_penalty(seg, D))

# Every valid one-hot assignment scores exactly the open path length.
for perm in itertools.permutations(seg.interior):
    bits = encode_order(perm, q)
    path = Segment((seg.first, *perm, seg.last))
    print(perm, q.energy(bits), path.open_length(D))

# Broken assignments decode to a violation instead of an order.
print(decode_solution([0] * 9, q, seg))

# The text map is what an external sampler would receive.
print(qubo_to_text(q).splitlines()[:4])
