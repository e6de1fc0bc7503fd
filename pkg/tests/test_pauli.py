import functools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticefold.pauli import PauliSum, walsh_hadamard

SINGLE = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}


def kron_dense(h: PauliSum) -> np.ndarray:
    """Reference matrix from Kronecker products; qubit 0 is the leftmost factor."""
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for s, c in h.terms.items():
        out += c * functools.reduce(np.kron, [SINGLE[p] for p in s])
    return out


pauli_strings = lambda n: st.text(alphabet="IXYZ", min_size=n, max_size=n)


@st.composite
def pauli_sums(draw, n=3):
    terms = draw(st.dictionaries(pauli_strings(n), st.floats(-2, 2, allow_nan=False), max_size=6))
    return PauliSum(n, terms)


@settings(max_examples=60, deadline=None)
@given(pauli_sums())
def test_sparse_matches_kronecker(h):
    np.testing.assert_allclose(h.to_dense(), kron_dense(h), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.text(alphabet="IZ", min_size=4, max_size=4), st.floats(-2, 2), max_size=8))
def test_diagonal_matches_kronecker(terms):
    h = PauliSum(4, terms)
    np.testing.assert_allclose(h.diagonal(), np.diag(kron_dense(h)).real, atol=1e-12)


def test_many_terms_per_x_mask_use_transform_path():
    rng = np.random.default_rng(3)
    terms = {}
    for m in range(16):
        z = "".join("Z" if m >> (3 - i) & 1 else "I" for i in range(4))
        terms["X" + z[1:]] = terms.get("X" + z[1:], 0) + rng.normal()
    h = PauliSum(4, terms)
    np.testing.assert_allclose(h.to_dense(), kron_dense(h), atol=1e-12)


def test_big_endian_convention():
    z0 = PauliSum.from_ops(2, {0: "Z"})
    # qubit 0 is the most significant bit: |10> is index 2
    np.testing.assert_array_equal(z0.diagonal(), [1, 1, -1, -1])


def test_product_phases():
    x = PauliSum(1, {"X": 1.0})
    z = PauliSum(1, {"Z": 1.0})
    assert x * x == PauliSum.identity(1)
    # XZ = -iY is not Hermitian, so it cannot be stored with real weights
    with pytest.raises(ValueError, match="Hermitian"):
        x * z
    y = PauliSum(1, {"Y": 1.0})
    # XY + YX = 0 and the iZ phases cancel inside one product
    assert (x + y) * (x + y) == PauliSum.identity(1, 2.0)


@settings(max_examples=40, deadline=None)
@given(pauli_sums(2), pauli_sums(2))
def test_hermitian_products_match_dense(a, b):
    try:
        prod = a * b
    except ValueError:
        return
    np.testing.assert_allclose(prod.to_dense(), kron_dense(a) @ kron_dense(b), atol=1e-12)


def test_apply_matches_matrix():
    rng = np.random.default_rng(0)
    h = PauliSum(3, {"XYZ": 0.5, "ZZI": -1.0, "IXX": 2.0, "YYI": 0.25})
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    np.testing.assert_allclose(h.apply(v), kron_dense(h) @ v, atol=1e-12)


def test_text_roundtrip_is_bit_exact():
    h = PauliSum(3, {"ZIZ": 1 / 3, "IIZ": -0.1, "XXI": 1e-7, "III": 2.0})
    text = h.to_text()
    assert text.splitlines()[0].endswith("III")
    back = PauliSum.from_text(text)
    assert back.terms == h.terms


def test_text_rejects_garbage():
    with pytest.raises(ValueError, match="line 1"):
        PauliSum.from_text("nonsense\n")
    with pytest.raises(ValueError):
        PauliSum(2, {"XQ": 1.0})


def test_walsh_hadamard_roundtrip():
    rng = np.random.default_rng(1)
    v = rng.normal(size=32)
    np.testing.assert_allclose(walsh_hadamard(walsh_hadamard(v, 5), 5, normalize=False), v)


def test_locality_and_support():
    h = PauliSum(4, {"ZIZZ": 1.0, "IZII": 1.0})
    assert h.locality() == 3
    assert h.support("ZIZZ") == (0, 2, 3)
    assert h.is_diagonal()
