import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticefold.encoding import (
    XY,
    XZ,
    Fixed,
    bits_to_index,
    build_encoding,
    decode,
    encode,
    feasible_mask,
    feasible_states,
    index_to_bits,
    is_feasible,
)
from latticefold.lattice import Conformation, LatticeKind, iter_self_avoiding_walks


@pytest.mark.parametrize("n", range(4, 21))
def test_qubit_counts(n):
    assert build_encoding("planar", n).n_qubits == 4 * n - 10
    assert build_encoding("cubic", n).n_qubits == 6 * n - 17


def test_planar_four_layout(enc4):
    assert enc4.turn_slots(1) == (0, 1, Fixed(0), Fixed(0))
    assert enc4.turn_slots(2) == (2, 3, 4, 5)


def test_cubic_turn_two_has_no_back():
    e = build_encoding("cubic", 5)
    assert e.turn_slots(2)[5] == Fixed(0)
    assert len(e.turn_qubits(2)) == 5
    assert len(e.turn_qubits(3)) == 6


def test_too_short():
    with pytest.raises(ValueError):
        build_encoding("planar", 3)


def test_flags(enc4):
    assert enc4.direction_flag(1, 0, "100100") == 1
    assert enc4.direction_flag(2, 1, "100100") == 1
    assert enc4.direction_flag(2, 0, "100100") == 0
    for bits in ("000000", "111111", "010010"):
        assert enc4.direction_flag(1, 2, bits) == 0
    cubic = build_encoding("cubic", 4)
    assert cubic.direction_flag(2, 5, "1" * cubic.n_qubits) == 0
    with pytest.raises(IndexError):
        enc4.direction_flag(3, 0, "100100")


def test_decode_examples(enc4):
    assert str(decode(enc4, "01 0010")) == "RUL"
    assert decode(enc4, "11 0010") is None
    assert decode(enc4, "10 0000") is None
    with pytest.raises(ValueError):
        decode(enc4, "0100")


def test_encode_examples(enc4):
    assert encode(enc4, Conformation.from_string("planar", "RUL")) == "010010"
    assert encode(enc4, Conformation.from_string("planar", "RRR")) == "101000"
    with pytest.raises(ValueError, match="excluded"):
        encode(enc4, Conformation.from_string("planar", "RLR"))


def test_feasibility_examples(enc4):
    assert is_feasible(enc4, "10 1000", XY) and is_feasible(enc4, "10 1000", XZ)
    assert not is_feasible(enc4, "10 0000", XY) and is_feasible(enc4, "10 0000", XZ)
    assert not is_feasible(enc4, "11 1111", XY) and not is_feasible(enc4, "11 1111", XZ)


def test_feasible_state_lists(enc4):
    xy = feasible_states(enc4, XY)
    assert len(xy) == 8 and xy == sorted(xy)
    assert "101000" in xy and "010001" in xy
    assert len(feasible_states(enc4, XZ)) == 15
    assert len(feasible_states(build_encoding("cubic", 4), XY)) == 10


@pytest.mark.parametrize("lattice,n", [("planar", 4), ("planar", 5), ("planar", 6), ("cubic", 4), ("cubic", 5)])
def test_feasible_sets(lattice, n):
    e = build_encoding(lattice, n)
    xy, xz = feasible_states(e, XY), feasible_states(e, XZ)
    sizes = [len(e.turn_qubits(t)) for t in range(1, e.n_turns + 1)]
    assert len(xy) == int(np.prod(sizes))
    assert len(xz) == int(np.prod([s + 1 for s in sizes]))
    assert set(xy) <= set(xz)
    # the vectorised mask agrees with the per-string predicate
    for mode, states in ((XY, xy), (XZ, xz)):
        assert [index_to_bits(i, e.n_qubits) for i in np.flatnonzero(feasible_mask(e, mode))] == states


@pytest.mark.parametrize("lattice,n", [("planar", 4), ("planar", 5), ("planar", 6), ("cubic", 4), ("cubic", 5)])
def test_encode_decode_roundtrip(lattice, n):
    e = build_encoding(lattice, n)
    lat = LatticeKind.parse(lattice)
    for conf in iter_self_avoiding_walks(lat, n):
        bits = encode(e, conf)
        assert decode(e, bits) == conf
        for t in range(1, e.n_turns + 1):
            flags = [e.direction_flag(t, k, bits) for k in range(lat.n_dirs)]
            assert sum(flags) == 1 and flags[conf.turns[t]] == 1


def test_every_one_hot_string_decodes(enc4):
    for bits in feasible_states(enc4, XY):
        assert encode(enc4, decode(enc4, bits)) == bits


def test_turn1_fixed_encoding():
    e = build_encoding("planar", 4, turn1=1)
    assert e.n_qubits == 4
    assert e.fixed_turn1 == 1
    assert str(decode(e, "0010")) == "RUL"


@settings(max_examples=50)
@given(st.integers(0, 2**12 - 1))
def test_index_bits_roundtrip(i):
    assert bits_to_index(index_to_bits(i, 12)) == i


def test_format_groups_turns(enc4):
    assert enc4.format("010010") == "01 0010"
