"""QUBO solver backends.

Every backend exposes ``solve(qubo, seed) -> SolverResult`` and keeps no
state between calls, so slices can be solved concurrently and remote
samplers can stand in for the local ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from . import _kernels
from .core import Segment, tour_length
from .qubo import Qubo, qubo_from_text, qubo_to_text

__all__ = [
    "SolverResult",
    "SaParams",
    "Solver",
    "TooManyVariablesError",
    "solve_sa",
    "solve_exact",
    "permutation_oracle",
    "default_betas",
    "SimulatedAnnealingSolver",
    "ExactSolver",
    "RemoteSolver",
    "LoopbackTransport",
    "encode_request",
    "decode_request",
    "encode_response",
    "decode_response",
]

EXACT_MAX_VARS = 25
ORACLE_MAX_INTERIOR = 9


class TooManyVariablesError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SolverResult:
    bits: np.ndarray
    energy: float
    samples: int

    def __eq__(self, other):
        if not isinstance(other, SolverResult):
            return NotImplemented
        return (
            np.array_equal(self.bits, other.bits)
            and self.energy == other.energy
            and self.samples == other.samples
        )


@dataclass(frozen=True)
class SaParams:
    """Annealing settings. Unset betas are derived from the QUBO (see default_betas)."""

    sweeps: int = 1000
    reads: int = 10
    beta_initial: float | None = None
    beta_final: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1 or self.reads < 1:
            raise ValueError("sweeps and reads must be >= 1")
        if self.beta_initial is not None and self.beta_final is not None:
            if not 0 < self.beta_initial < self.beta_final:
                raise ValueError("need 0 < beta_initial < beta_final")


class Solver(Protocol):
    def solve(self, qubo: Qubo, seed: int = 0) -> SolverResult: ...


def default_betas(qubo: Qubo) -> tuple[float, float]:
    """Schedule endpoints 2 / max|coefficient| and 20 / max|coefficient|.

    In a slice QUBO the largest coefficient is twice the penalty A, so this
    anneals from beta = 1/A, where constraint violations are still cheap,
    to 10/A, where valid orderings are frozen in.
    """
    coeffs = np.abs(np.concatenate((qubo.linear, qubo.quadratic[np.triu_indices(qubo.num_vars, 1)])))
    top = coeffs.max() if coeffs.size else 0.0
    if top == 0:
        return 0.1, 10.0
    return 2.0 / top, 20.0 / top


def _kernel_inputs(qubo: Qubo):
    h = np.ascontiguousarray(qubo.linear, dtype=np.float64)
    J = np.ascontiguousarray(qubo.symmetric_matrix(), dtype=np.float64)
    return h, J


def _result(qubo: Qubo, bits: np.ndarray, samples: int) -> SolverResult:
    bits = np.asarray(bits, dtype=np.int8).copy()
    bits.setflags(write=False)
    return SolverResult(bits, qubo.energy(bits), samples)


def solve_sa(qubo: Qubo, params: SaParams = SaParams()) -> SolverResult:
    """Simulated annealing with a geometric inverse-temperature schedule; best of ``reads``."""
    if qubo.num_vars < 1:
        raise ValueError("QUBO has no variables")
    b0, b1 = default_betas(qubo)
    beta_initial = params.beta_initial if params.beta_initial is not None else b0
    beta_final = params.beta_final if params.beta_final is not None else b1
    if params.sweeps == 1:
        betas = np.array([beta_final])
    else:
        betas = np.geomspace(beta_initial, beta_final, params.sweeps)
    h, J = _kernel_inputs(qubo)
    rows, cols = np.nonzero(J)
    indptr = np.searchsorted(rows, np.arange(qubo.num_vars + 1)).astype(np.int64)
    seed = int(np.random.SeedSequence(params.seed).generate_state(1, np.uint64)[0])
    bits, _ = _kernels.anneal(
        h, indptr, cols.astype(np.int64), J[rows, cols], betas, params.reads, np.uint64(seed)
    )
    return _result(qubo, bits, params.reads)


def solve_exact(qubo: Qubo) -> SolverResult:
    """Global minimum by enumeration; ties go to the lexicographically smallest bits."""
    if qubo.num_vars > EXACT_MAX_VARS:
        raise TooManyVariablesError(f"{qubo.num_vars} variables exceed the cap of {EXACT_MAX_VARS}")
    h, J = _kernel_inputs(qubo)
    bits, _ = _kernels.enumerate_min(h, J, 1e-12)
    return _result(qubo, bits, 2**qubo.num_vars)


def permutation_oracle(segment: Segment, matrix: np.ndarray) -> tuple[tuple[int, ...], float]:
    """Shortest interior order between the fixed endpoints, by brute force.

    Equal lengths are resolved the way ``solve_exact`` resolves them on the
    slice QUBO: the order whose bit encoding is lexicographically smallest.
    """
    q = segment.interior_count
    if q > ORACLE_MAX_INTERIOR:
        raise TooManyVariablesError(f"{q} interior cities exceed the cap of {ORACLE_MAX_INTERIOR}")
    interior = segment.interior
    if q == 0:
        return (), segment.open_length(matrix)

    def tie_key(order):
        # bits for slot a are a one-hot row; a later 1 makes the row smaller
        pos = {c: p for p, c in enumerate(order)}
        return tuple(-pos[c] for c in interior)

    best_order, best_len = None, np.inf
    for perm in itertools.permutations(interior):
        length = tour_length((segment.first, *perm, segment.last), matrix, closed=False)
        if length < best_len or (length == best_len and tie_key(perm) < tie_key(best_order)):
            best_order, best_len = perm, length
    return tuple(best_order), float(best_len)


@dataclass(frozen=True)
class SimulatedAnnealingSolver:
    params: SaParams = SaParams()

    def solve(self, qubo: Qubo, seed: int = 0) -> SolverResult:
        p = self.params
        return solve_sa(qubo, SaParams(p.sweeps, p.reads, p.beta_initial, p.beta_final, seed))


@dataclass(frozen=True)
class ExactSolver:
    def solve(self, qubo: Qubo, seed: int = 0) -> SolverResult:
        return solve_exact(qubo)


# Remote wire format. Request: "reads <n>", "vars <n>", then the qubo text
# map. Response: one "<bitstring> <energy>" line per sample.


def encode_request(qubo: Qubo, reads: int) -> bytes:
    return (f"reads {reads}\nvars {qubo.num_vars}\n" + qubo_to_text(qubo)).encode()


def decode_request(payload: bytes) -> tuple[Qubo, int]:
    lines = payload.decode().splitlines()
    reads = num_vars = None
    body = []
    for line in lines:
        parts = line.split()
        if parts and parts[0] == "reads":
            reads = int(parts[1])
        elif parts and parts[0] == "vars":
            num_vars = int(parts[1])
        else:
            body.append(line)
    if reads is None or num_vars is None:
        raise ValueError("request lacks 'reads' or 'vars' header")
    return qubo_from_text("\n".join(body), num_vars), reads


def encode_response(samples: list[tuple[np.ndarray, float]]) -> bytes:
    return "".join(
        "".join(str(int(b)) for b in bits) + f" {energy!r}\n" for bits, energy in samples
    ).encode()


def decode_response(payload: bytes) -> list[tuple[np.ndarray, float]]:
    out = []
    for line in payload.decode().splitlines():
        if not line.strip():
            continue
        bitstring, energy = line.split()
        out.append((np.array([int(c) for c in bitstring], dtype=np.int8), float(energy)))
    return out


class LoopbackTransport:
    """In-process stand-in for a remote sampler: each read is one local SA read."""

    def __init__(self, params: SaParams = SaParams()):
        self.params = params

    def __call__(self, payload: bytes) -> bytes:
        qubo, reads = decode_request(payload)
        seed = self.params.seed
        samples = []
        for r in range(reads):
            p = SaParams(self.params.sweeps, 1, self.params.beta_initial, self.params.beta_final, seed + r)
            res = solve_sa(qubo, p)
            samples.append((res.bits, res.energy))
        return encode_response(samples)


@dataclass
class RemoteSolver:
    """Client side of the wire format; ``transport`` maps request bytes to response bytes."""

    transport: Callable[[bytes], bytes]
    reads: int = 10

    def solve(self, qubo: Qubo, seed: int = 0) -> SolverResult:
        samples = decode_response(self.transport(encode_request(qubo, self.reads)))
        if not samples:
            raise RuntimeError("remote solver returned no samples")
        # energies are re-evaluated locally; the reported ones are not trusted
        scored = [(qubo.energy(bits), i) for i, (bits, _) in enumerate(samples)]
        _, best = min(scored)
        return _result(qubo, samples[best][0], len(samples))

