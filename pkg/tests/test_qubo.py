import itertools

import numpy as np
import pytest

from conftest import random_slice_setup
from pathslice.core import Segment
from pathslice.qubo import (
    EmptyQuboError,
    OneHotViolation,
    Qubo,
    build_slice_qubo,
    decode_solution,
    default_penalty,
    encode_order,
    qubo_from_text,
    qubo_to_text,
)

SQUARE = np.array(
    [[0, 3, 4, 5, 2], [3, 0, 5, 4, 6], [4, 5, 0, 3, 7], [5, 4, 3, 0, 1], [2, 6, 7, 1, 0]], dtype=float
)


def _all_bits(n):
    return (np.arange(2**n)[:, None] >> np.arange(n)[::-1] & 1).astype(np.int8)


def test_single_interior_city():
    seg = Segment((0, 2, 4))
    qubo = build_slice_qubo(seg, SQUARE, penalty=50.0)
    assert qubo.num_vars == 1
    assert qubo.energy([1]) == SQUARE[0, 2] + SQUARE[2, 4]
    assert qubo.energy([0]) == 100.0
    assert qubo.energy([0]) > qubo.energy([1])


def test_empty_interior():
    with pytest.raises(EmptyQuboError):
        build_slice_qubo(Segment((0, 1)), SQUARE)
    with pytest.raises(ValueError):
        build_slice_qubo(Segment((0, 1, 2)), SQUARE, penalty=0)


def test_three_interior_exhaustive():
    seg = Segment((0, 1, 2, 3, 4))
    qubo = build_slice_qubo(seg, SQUARE)
    assert qubo.num_vars == 9
    valid = {}
    for bits in _all_bits(9):
        order = decode_solution(bits, qubo, seg)
        if isinstance(order, tuple):
            valid[order] = qubo.energy(bits)
    assert len(valid) == 6
    for order, e in valid.items():
        path = (0, *order, 4)
        assert abs(e - Segment(path).open_length(SQUARE)) < 1e-9


def test_penalty_rule():
    mat = np.ones((5, 5)) - np.eye(5)
    assert default_penalty(Segment((0, 1, 2, 3, 4)), mat) == 8
    assert default_penalty(Segment((0, 1, 2)), np.zeros((3, 3))) == 1.0


def _energies(qubo, bits):
    b = bits.astype(float)
    return qubo.offset + b @ qubo.linear + ((b @ qubo.quadratic) * b).sum(axis=1)


def _valid_mask(qubo, bits):
    q = qubo.side
    grid = bits.reshape(len(bits), q, q)
    return np.all(grid.sum(axis=1) == 1, axis=1) & np.all(grid.sum(axis=2) == 1, axis=1)


def _exhaustive(qubo):
    bits = _all_bits(qubo.num_vars)
    return bits, _energies(qubo, bits)


def test_penalty_dominates_on_random_slices():
    rng = np.random.default_rng(11)
    for _ in range(200):
        seg, mat = random_slice_setup(rng, int(rng.integers(1, 5)))
        qubo = build_slice_qubo(seg, mat)
        bits, energies = _exhaustive(qubo)
        best = int(np.argmin(energies))
        assert energies[best] == pytest.approx(qubo.energy(bits[best]), abs=1e-9)
        assert isinstance(decode_solution(bits[best], qubo, seg), tuple)

        doubled = build_slice_qubo(seg, mat, penalty=2 * default_penalty(seg, mat))
        energies2 = _energies(doubled, bits)
        assert int(np.argmin(energies2)) == best

        ok = _valid_mask(qubo, bits)
        assert energies[~ok].min() > energies[ok].max()


def test_valid_energy_equals_open_length_exactly():
    rng = np.random.default_rng(12)
    for _ in range(50):
        q = int(rng.integers(1, 6))
        seg, mat = random_slice_setup(rng, q)
        qubo = build_slice_qubo(seg, mat)
        for perm in itertools.permutations(seg.interior):
            e = qubo.energy(encode_order(perm, qubo))
            assert abs(e - Segment((seg.first, *perm, seg.last)).open_length(mat)) < 1e-9


def test_decode_cases():
    seg = Segment((0, 1, 2, 3, 4))
    qubo = build_slice_qubo(seg, SQUARE)
    assert decode_solution(np.eye(3, dtype=int).reshape(-1), qubo, seg) == (1, 2, 3)
    v = decode_solution(np.zeros(9, dtype=int), qubo, seg)
    assert v == OneHotViolation("position", 1, 0)
    # columns fine, but the first city takes two positions
    bits = np.zeros((3, 3), dtype=int)
    bits[0, 0] = bits[0, 1] = bits[2, 2] = 1
    assert decode_solution(bits.reshape(-1), qubo, seg) == OneHotViolation("city", 1, 2)
    with pytest.raises(ValueError):
        decode_solution(np.zeros(4), qubo, seg)


def test_decode_round_trip():
    rng = np.random.default_rng(3)
    for q in range(1, 6):
        seg, mat = random_slice_setup(rng, q)
        qubo = build_slice_qubo(seg, mat)
        for perm in itertools.permutations(seg.interior):
            bits = encode_order(perm, qubo)
            order = decode_solution(bits, qubo, seg)
            assert order == perm
            np.testing.assert_array_equal(encode_order(order, qubo), bits)


def test_variable_counts(bundled_instances, bundled_matrices):
    n = bundled_instances["ulysses16"].dimension
    assert n * n == 256
    seg = Segment(tuple(range(10)))
    assert build_slice_qubo(seg, bundled_matrices["ulysses16"]).num_vars == 64
    for m in range(3, 12):
        assert build_slice_qubo(Segment(tuple(range(m))), bundled_matrices["att48"]).num_vars == (m - 2) ** 2


def test_var_map_is_bijection():
    seg = Segment((4, 0, 2, 1, 3))
    qubo = build_slice_qubo(seg, SQUARE)
    vm = qubo.var_map
    assert sorted(vm.values()) == list(range(9))
    assert {c for c, _ in vm} == {0, 2, 1}


def test_text_round_trip():
    rng = np.random.default_rng(5)
    for q in (1, 2, 4):
        seg, mat = random_slice_setup(rng, q)
        qubo = build_slice_qubo(seg, mat)
        text = qubo_to_text(qubo)
        assert text.startswith("offset ")
        back = qubo_from_text(text, qubo.num_vars)
        np.testing.assert_array_equal(back.linear, qubo.linear)
        np.testing.assert_array_equal(back.quadratic, qubo.quadratic)
        assert back.offset == qubo.offset
        for line in text.splitlines()[1:]:
            i, j, _ = line.split()
            assert int(i) <= int(j)


def test_energy_is_order_independent():
    rng = np.random.default_rng(6)
    seg, mat = random_slice_setup(rng, 4)
    qubo = build_slice_qubo(seg, mat)
    lines = qubo_to_text(qubo).splitlines()
    shuffled = [lines[0]] + [lines[1:][i] for i in rng.permutation(len(lines) - 1)]
    # swapped i/j also land in the upper triangle
    flipped = [lines[0]] + [" ".join(l.split()[1::-1] + l.split()[2:]) for l in lines[1:]]
    a = qubo_from_text("\n".join(shuffled), qubo.num_vars)
    b = qubo_from_text("\n".join(flipped), qubo.num_vars)
    for bits in _all_bits(16)[rng.choice(2**16, 300, replace=False)]:
        e = qubo.energy(bits)
        assert a.energy(bits) == pytest.approx(e, abs=1e-9)
        assert b.energy(bits) == pytest.approx(e, abs=1e-9)


def test_qubo_folds_lower_triangle():
    q = Qubo([1.0, 2.0], [[0.5, 0.0], [3.0, 0.0]], offset=1.0)
    np.testing.assert_array_equal(q.linear, [1.5, 2.0])
    assert q.quadratic[0, 1] == 3.0 and q.quadratic[1, 0] == 0.0
    assert q.energy([1, 1]) == 1.0 + 1.5 + 2.0 + 3.0
