import itertools

import numpy as np
import pytest

from latticefold.encoding import XY, basis_bits, build_encoding, decode, encode, feasible_mask
from latticefold.hamiltonian import (
    adjacency,
    build_cost,
    build_h_overlap,
    build_h_pair,
    default_lambda,
    h_olap_pair,
    polynomial_values,
    sum_string_digit,
    sum_string_digits,
    to_pauli,
    turn_vectors,
)
from latticefold.lattice import (
    Conformation,
    classical_energy,
    contact_pairs,
    coordinates,
    enumerate_folds,
    is_self_avoiding,
    overlap_pairs,
)
from latticefold.pauli import PauliSum
from latticefold.polynomial import BooleanPolynomial, xnor

from conftest import hp_instance, random_hp_sequences

q = BooleanPolynomial.variable

SIZES = [("planar", 4), ("planar", 5), ("planar", 6), ("cubic", 4), ("cubic", 5)]


def test_xnor_with_complement_is_zero():
    p = xnor(q(0), 1 - q(0))
    assert p.evaluate([0]) == 0 and p.evaluate([1]) == 0


def test_sum_string_examples(enc4):
    bits = "100010"  # R, R, L
    assert sum_string_digit(enc4, 0, 1, 3, 1).evaluate(bits) == 1
    assert sum_string_digit(enc4, 2, 1, 3, 1).evaluate(bits) == 1
    assert sum_string_digit(enc4, 1, 2, 3, 1) == enc4.flag_polynomial(2, 1)
    assert sum_string_digit(enc4, 0, 1, 3, 1).evaluate("000000") == 0


def test_sum_string_width_holds_full_count():
    # two steps right in a row: the count 2 needs a second digit
    e = build_encoding("planar", 4)
    digits = sum_string_digits(e, 0, 0, 2)
    assert len(digits) == 2
    assert [d.evaluate("100000") for d in digits] == [0, 1]
    with pytest.raises(ValueError):
        sum_string_digit(e, 0, 0, 2, 3)


@pytest.mark.parametrize("lattice,n", [("planar", 5), ("cubic", 5)])
def test_sum_strings_count_turns(lattice, n):
    e = build_encoding(lattice, n)
    bits = basis_bits(e.n_qubits)
    rows = bits[:: max(1, len(bits) // 512)]
    steps = turn_vectors(e, rows)
    units = e.lattice.unit_vectors
    for k in range(e.lattice.n_dirs):
        for i, j in itertools.combinations(range(n), 2):
            digits = sum_string_digits(e, k, i, j)
            value = sum((1 << r) * d.evaluate_all(rows) for r, d in enumerate(digits))
            # count of flags equal to k along [i, j), read from the summed step vectors
            flags = np.stack(
                [np.asarray([e.direction_flag(t, k, b) if t else int(k == 0) for b in rows])
                 for t in range(i, j)]
            )
            np.testing.assert_array_equal(value, flags.sum(axis=0))


def test_h_olap_pair_examples(enc4):
    assert h_olap_pair(enc4, 1, 3).evaluate("100010") == 1
    assert h_olap_pair(enc4, 1, 3).evaluate("100100") == 0
    assert h_olap_pair(enc4, 0, 2).evaluate("010010") == 0
    with pytest.raises(ValueError):
        h_olap_pair(enc4, 0, 3)


def test_adjacency_examples(enc4):
    up, right = 1, 0
    assert adjacency(enc4, up, 0, 3).evaluate("010010") == 1
    assert adjacency(enc4, right, 0, 3).evaluate("010010") == 0
    assert all(adjacency(enc4, k, 0, 3).evaluate("101000") == 0 for k in range(4))
    with pytest.raises(ValueError):
        adjacency(enc4, 0, 0, 2)


def test_h_overlap_pair_counts(enc4):
    assert build_h_overlap(enc4, 1.0).evaluate("100010") == 1
    assert build_h_overlap(enc4, 1.0, skip_short_range=True).is_zero()
    assert list(overlap_pairs(4)) == [(0, 2), (1, 3)]


def test_h_pair_examples(enc4, hpph):
    h = build_h_pair(enc4, hpph)
    assert h.evaluate("010010") == -1
    assert h.evaluate("101000") == 0
    assert build_h_pair(enc4, hp_instance("PPPP")).is_zero()


def test_default_lambda(hpph):
    assert default_lambda(hpph) == 2.0


def test_to_pauli_expansions():
    assert to_pauli(q(0), 1) == PauliSum(1, {"I": 0.5, "Z": -0.5})
    assert to_pauli(q(0) * q(1), 2) == PauliSum(2, {"II": 0.25, "ZI": -0.25, "IZ": -0.25, "ZZ": 0.25})
    p = to_pauli(q(0) * q(1) * q(2), 3)
    assert len(p) == 8 and p.locality() == 3


@pytest.mark.parametrize("lattice,n", SIZES)
def test_gadgets_match_coordinates(lattice, n):
    e = build_encoding(lattice, n)
    bits = basis_bits(e.n_qubits)
    feas = bits[feasible_mask(e, XY)]
    coords = np.stack([coordinates(decode(e, b)) for b in feas])
    for i, j in overlap_pairs(n):
        want = np.all(coords[:, i] == coords[:, j], axis=1)
        np.testing.assert_array_equal(h_olap_pair(e, i, j).evaluate_all(feas), want)
    units = e.lattice.unit_vectors
    for i, j in contact_pairs(n):
        for k in range(e.lattice.n_dirs):
            want = np.all(coords[:, j] - coords[:, i] == units[k], axis=1)
            np.testing.assert_array_equal(adjacency(e, k, i, j).evaluate_all(feas), want)


@pytest.mark.parametrize("lattice,n", SIZES)
def test_symbolic_and_geometric_routes_agree_everywhere(lattice, n):
    for seq in random_hp_sequences(3, n, seed=n):
        inst = hp_instance(seq, lattice)
        e = build_encoding(lattice, n)
        for skip_short, skip_long in ((False, False), (True, False), (True, True)):
            h = build_cost(e, inst, skip_short=skip_short, skip_long=skip_long)
            np.testing.assert_allclose(polynomial_values(h.polynomial, e.n_qubits), h.diagonal())


@pytest.mark.parametrize("lattice,n", [("planar", 4), ("planar", 5), ("cubic", 4)])
def test_pauli_eigenvalues_match_polynomial(lattice, n):
    inst = hp_instance("H" + "P" * (n - 2) + "H", lattice)
    e = build_encoding(lattice, n)
    h = build_cost(e, inst)
    direct = to_pauli(h.polynomial, e.n_qubits)
    assert direct.is_diagonal()
    np.testing.assert_allclose(direct.diagonal(), h.diagonal(), atol=1e-12)
    assert direct == h.pauli


def test_cost_examples(enc4, hpph):
    h = build_cost(enc4, hpph)
    # R R L: residues 1 and 3 coincide (+2) and 3 sits next to 0 (-1)
    assert h.evaluate("100010") == 1.0
    assert h.evaluate("010010") == -1
    for conf, energy in enumerate_folds(hpph).folds:
        assert h.evaluate(encode(enc4, conf)) == energy
    # no remaining overlap terms once the long-range penalty is dropped
    reduced = build_cost(enc4, hpph, skip_short=True, skip_long=True)
    assert reduced.pauli == to_pauli(build_h_pair(enc4, hpph), 6)


def test_unconstrained_argmin_includes_non_one_hot_strings(enc4, hpph):
    # a zero tuple makes two residues coincide without tripping any even-pair
    # overlap gadget, so the global minimum is not confined to one-hot strings
    diag = build_cost(enc4, hpph).diagonal()
    minima = {format(i, "06b") for i in np.flatnonzero(diag == diag.min())}
    assert "010010" in minima
    assert {"000011", "000110", "010111"} <= minima


def test_overlapping_feasible_strings_respect_penalty_bound():
    for lattice, n in SIZES:
        for seq in random_hp_sequences(4, n, seed=100 + n):
            inst = hp_instance(seq, lattice)
            e = build_encoding(lattice, n)
            h = build_cost(e, inst)
            diag = h.diagonal()
            idx = np.flatnonzero(feasible_mask(e, XY))
            confs = [decode(e, b) for b in e.basis_bits[idx]]
            clean = np.array([is_self_avoiding(c) for c in confs])
            best = diag[idx[clean]].min()
            spread = sum(abs(p) for *_, p in inst.interaction_pairs())
            assert diag[idx[~clean]].min() >= best + h.lambda_olap - spread - 1e-9


def test_mismatched_instance_rejected(enc4):
    with pytest.raises(ValueError):
        build_cost(enc4, hp_instance("HPPHP"))
    with pytest.raises(ValueError):
        build_cost(enc4, hp_instance("HPPH"), lambda_olap=0)


def test_cost_hamiltonian_is_read_only(hpph_cost):
    with pytest.raises(ValueError):
        hpph_cost.diagonal()[0] = 1.0
