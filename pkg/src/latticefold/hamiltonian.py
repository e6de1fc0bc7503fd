"""Cost Hamiltonian: overlap penalty plus pairwise contact energy.

The symbolic route builds a :class:`BooleanPolynomial` over the encoding's
qubits (sum strings, XNOR products) and expands it into Z strings with
``q = (1 - Z) / 2``. The basis-state energies used by the simulator come from
the equivalent walk-geometry evaluation, which scales to larger instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .encoding import Bits, Encoding, check_bits
from .lattice import ProteinInstance, overlap_pairs
from .pauli import PauliSum, walsh_hadamard
from .polynomial import BooleanPolynomial, product, xnor

# ---------------------------------------------------------------------------
# sum strings


def _add_bit(digits: list[BooleanPolynomial], bit: BooleanPolynomial) -> list[BooleanPolynomial]:
    """Ripple-carry ``bit`` into a little-endian list of digit polynomials."""
    out = []
    carry = bit
    for d in digits:
        out.append(d + carry - 2 * (d * carry))
        carry = d * carry
    if not carry.is_zero():
        out.append(carry)
    return out


@lru_cache(maxsize=4096)
def sum_string_digits(e: Encoding, k: int, i: int, j: int) -> tuple[BooleanPolynomial, ...]:
    """Little-endian digits of the number of turns in ``[i, j)`` that go ``k``.

    Always returns ``(j - i).bit_length()`` digits (zero-padded), which is the
    width needed to hold a count of up to ``j - i``.
    """
    if not 0 <= i < j <= e.n_residues - 1:
        raise ValueError(f"need 0 <= i < j <= {e.n_residues - 1}, got ({i}, {j})")
    digits: list[BooleanPolynomial] = []
    for p in range(i, j):
        digits = _add_bit(digits, e.flag_polynomial(p, k))
    width = (j - i).bit_length()
    digits += [BooleanPolynomial()] * (width - len(digits))
    return tuple(digits[:width])


def sum_string_digit(e: Encoding, k: int, i: int, j: int, r: int) -> BooleanPolynomial:
    """Digit ``r`` (``r = 1`` least significant) of the turn count."""
    digits = sum_string_digits(e, k, i, j)
    if not 1 <= r <= len(digits):
        raise ValueError(f"digit {r} out of range 1..{len(digits)} for span {j - i}")
    return digits[r - 1]


def _axis_equal(e: Encoding, axis: int, i: int, j: int) -> BooleanPolynomial:
    """1 iff residues i and j share their coordinate along ``axis``."""
    lat = e.lattice
    plus = sum_string_digits(e, axis, i, j)
    minus = sum_string_digits(e, lat.opposite(axis), i, j)
    return product(xnor(a, b) for a, b in zip(plus, minus))


def _count_is_one_more(a: tuple, b: tuple) -> BooleanPolynomial:
    """1 iff the binary number ``a`` equals ``b + 1`` (little-endian digits)."""
    width = len(a)
    total = BooleanPolynomial()
    for p in range(width):
        # b ends in 0 followed by p ones, a ends in 1 followed by p zeros
        term = product(b[r] * (1 - a[r]) for r in range(p))
        term = term * ((1 - b[p]) * a[p])
        term = term * product(xnor(a[r], b[r]) for r in range(p + 1, width))
        total = total + term
    return total


def h_olap_pair(e: Encoding, i: int, j: int) -> BooleanPolynomial:
    """1 on bitstrings where residues ``i`` and ``j`` land on the same point."""
    if i > j:
        i, j = j, i
    if (j - i) % 2 or j - i < 2:
        raise ValueError(f"overlap terms need an even separation >= 2, got ({i}, {j})")
    return product(_axis_equal(e, ax, i, j) for ax in range(e.lattice.dims))


def adjacency(e: Encoding, k: int, i: int, j: int) -> BooleanPolynomial:
    """1 iff residue ``j`` sits exactly one step in direction ``k`` from residue ``i``."""
    if i > j:
        raise ValueError("adjacency expects i < j")
    if (j - i) % 2 == 0 or j - i < 3:
        raise ValueError(f"contact terms need an odd separation >= 3, got ({i}, {j})")
    lat = e.lattice
    ax = lat.axis(k)
    others = product(_axis_equal(e, w, i, j) for w in range(lat.dims) if w != ax)
    if others.is_zero():
        return others
    fwd = sum_string_digits(e, k, i, j)
    back = sum_string_digits(e, lat.opposite(k), i, j)
    return others * _count_is_one_more(fwd, back)


def default_lambda(instance: ProteinInstance) -> float:
    """Overlap weight that outweighs every possible contact gain."""
    return 1.0 + sum(abs(p) for _, _, p in instance.interaction_pairs())


def build_h_overlap(
    e: Encoding, lambda_olap: float, skip_short_range: bool = False
) -> BooleanPolynomial:
    if lambda_olap <= 0:
        raise ValueError("lambda_olap must be positive")
    total = BooleanPolynomial()
    for i, j in overlap_pairs(e.n_residues, 4 if skip_short_range else 2):
        total = total + h_olap_pair(e, i, j)
    return total * lambda_olap


def build_h_pair(e: Encoding, instance: ProteinInstance) -> BooleanPolynomial:
    total = BooleanPolynomial()
    for i, j, p in instance.interaction_pairs():
        contact = BooleanPolynomial()
        for k in range(e.lattice.n_dirs):
            contact = contact + adjacency(e, k, i, j)
        total = total + contact * p
    return total


# ---------------------------------------------------------------------------
# Pauli form

_EXPAND_BUDGET = 1 << 16


def _subset_sum(coeffs: np.ndarray, n: int) -> np.ndarray:
    """f(b) = sum of coeffs[S] over every S contained in b (subset zeta transform)."""
    f = coeffs.copy()
    for i in range(n):
        f = f.reshape(-1, 2, 1 << i)
        f[:, 1, :] += f[:, 0, :]
        f = f.reshape(-1)
    return f


def _mask_to_string(mask: int, n: int) -> str:
    return "".join("Z" if mask >> (n - 1 - i) & 1 else "I" for i in range(n))


def diagonal_to_pauli(values: np.ndarray, n_qubits: int) -> PauliSum:
    coeffs = walsh_hadamard(values, n_qubits)
    nz = np.flatnonzero(np.abs(coeffs) > 1e-12)
    return PauliSum(n_qubits, {_mask_to_string(int(m), n_qubits): float(coeffs[m]) for m in nz})


def polynomial_values(poly: BooleanPolynomial, n_qubits: int) -> np.ndarray:
    """Value of ``poly`` on every basis state, by a subset-sum transform."""
    coeffs = np.zeros(1 << n_qubits)
    for mono, c in poly.terms.items():
        mask = 0
        for q in mono:
            if q >= n_qubits:
                raise ValueError(f"polynomial uses qubit {q} beyond n_qubits={n_qubits}")
            mask |= 1 << (n_qubits - 1 - q)
        coeffs[mask] += c
    return _subset_sum(coeffs, n_qubits)


def to_pauli(poly: BooleanPolynomial, n_qubits: int) -> PauliSum:
    """Expand ``poly`` with ``q_i = (1 - Z_i) / 2``; Z has eigenvalue +1 on bit 0."""
    cost = sum(1 << len(m) for m in poly.terms)
    if cost > _EXPAND_BUDGET and n_qubits <= 26:
        return diagonal_to_pauli(polynomial_values(poly, n_qubits), n_qubits)
    terms: dict[str, float] = {}
    for mono, c in poly.terms.items():
        qs = sorted(mono)
        if qs and qs[-1] >= n_qubits:
            raise ValueError(f"polynomial uses qubit {qs[-1]} beyond n_qubits={n_qubits}")
        scale = c / (1 << len(qs))
        for mask in range(1 << len(qs)):
            letters = ["I"] * n_qubits
            sign = 1.0
            for pos, q in enumerate(qs):
                if mask >> pos & 1:
                    letters[q] = "Z"
                    sign = -sign
            s = "".join(letters)
            terms[s] = terms.get(s, 0.0) + sign * scale
    return PauliSum(n_qubits, terms)


# ---------------------------------------------------------------------------
# geometric evaluation


def turn_vectors(e: Encoding, bit_matrix: np.ndarray) -> np.ndarray:
    """Summed direction vectors of every turn, shape ``(rows, N-1, D)``.

    For one-hot rows this is the lattice step of each turn; for other rows it
    is exactly what the sum-string polynomials count.
    """
    lat = e.lattice
    rows = bit_matrix.shape[0]
    units = lat.unit_vectors
    out = np.zeros((rows, e.n_residues - 1, lat.dims), dtype=np.int8)
    out[:, 0, :] = units[0]
    for t in range(1, e.n_turns + 1):
        for k, s in enumerate(e.turn_slots(t)):
            if isinstance(s, int):
                flag = bit_matrix[:, s].astype(np.int8)
            elif s.value:
                flag = np.ones(rows, dtype=np.int8)
            else:
                continue
            out[:, t, :] += flag[:, None] * units[k].astype(np.int8)
    return out


def geometric_energies(
    e: Encoding,
    instance: ProteinInstance,
    lambda_olap: float,
    include_short: bool = True,
    include_long: bool = True,
    bit_matrix: np.ndarray | None = None,
) -> np.ndarray:
    """Cost of every row of ``bit_matrix`` computed from walk positions."""
    if bit_matrix is None:
        bit_matrix = e.basis_bits
    steps = turn_vectors(e, bit_matrix)
    pos = np.zeros((steps.shape[0], e.n_residues, e.lattice.dims), dtype=np.int16)
    np.cumsum(steps, axis=1, out=pos[:, 1:, :])
    out = np.zeros(steps.shape[0])
    if include_long:
        min_sep = 2 if include_short else 4
        for i, j in overlap_pairs(e.n_residues, min_sep):
            out += lambda_olap * np.all(pos[:, i] == pos[:, j], axis=1)
    for i, j, p in instance.interaction_pairs():
        diff = pos[:, j] - pos[:, i]
        is_unit = (np.abs(diff).sum(axis=1) == 1)
        out += p * is_unit
    return out


@dataclass(eq=False)
class CostHamiltonian:
    """Penalised fold energy as a diagonal operator.

    The symbolic polynomial and its Pauli expansion are built on first use;
    the diagonal comes from walk geometry and never needs the polynomial.
    """

    encoding: Encoding
    instance: ProteinInstance
    lambda_olap: float
    includes_short_range: bool
    includes_long_range: bool
    _polynomial: BooleanPolynomial | None = field(default=None, repr=False)
    _pauli: PauliSum | None = field(default=None, repr=False)
    _diag: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_qubits(self) -> int:
        return self.encoding.n_qubits

    @property
    def polynomial(self) -> BooleanPolynomial:
        if self._polynomial is None:
            e = self.encoding
            poly = build_h_pair(e, self.instance)
            if self.includes_long_range:
                poly = poly + build_h_overlap(
                    e, self.lambda_olap, skip_short_range=not self.includes_short_range
                )
            self._polynomial = poly
        return self._polynomial

    @property
    def pauli(self) -> PauliSum:
        if self._pauli is None:
            if self._polynomial is None and self.n_qubits <= 26:
                self._pauli = diagonal_to_pauli(self.diagonal(), self.n_qubits)
            else:
                self._pauli = to_pauli(self.polynomial, self.n_qubits)
        return self._pauli

    def diagonal(self) -> np.ndarray:
        """Energy of every computational basis state."""
        if self._diag is None:
            d = geometric_energies(
                self.encoding,
                self.instance,
                self.lambda_olap,
                self.includes_short_range,
                self.includes_long_range,
            )
            d.setflags(write=False)
            self._diag = d
        return self._diag

    def evaluate(self, bits: Bits) -> float:
        b = np.array([check_bits(self.encoding, bits)], dtype=np.uint8)
        return float(
            geometric_energies(
                self.encoding,
                self.instance,
                self.lambda_olap,
                self.includes_short_range,
                self.includes_long_range,
                bit_matrix=b,
            )[0]
        )


def build_cost(
    e: Encoding,
    instance: ProteinInstance,
    lambda_olap: float | None = None,
    skip_short: bool = False,
    skip_long: bool = False,
    symbolic: bool = True,
) -> CostHamiltonian:
    """``H_C = H_overlap + H_pair``.

    ``skip_short`` drops the i/i+2 overlap terms (a short-range mixer takes
    care of them); ``skip_long`` drops the overlap penalty entirely. With
    ``symbolic=False`` the polynomial is only expanded if someone asks for it.
    """
    if instance.n_residues != e.n_residues or instance.lattice is not e.lattice:
        raise ValueError("instance does not match the encoding")
    if lambda_olap is None:
        lambda_olap = default_lambda(instance)
    if lambda_olap <= 0:
        raise ValueError("lambda_olap must be positive")
    h = CostHamiltonian(
        encoding=e,
        instance=instance,
        lambda_olap=float(lambda_olap),
        includes_short_range=not (skip_short or skip_long),
        includes_long_range=not skip_long,
    )
    if symbolic:
        h.polynomial
    return h
