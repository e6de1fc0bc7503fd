"""Mixer Hamiltonians for the one-hot turn encoding.

Seven variants: the plain X mixer, and XY (SWAP based) / XZ (conditional
flip based) mixers in simple, short-range-safe and long-range-safe form.
Diagonal controls are written as boolean polynomials over the other turns'
qubits, expanded into Z strings, and multiplied onto the off-diagonal kernel.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .encoding import XY, XZ, Encoding
from .hamiltonian import CostHamiltonian, to_pauli
from .lattice import overlap_pairs
from .pauli import PauliSum, pauli_sum
from .polynomial import BooleanPolynomial, product

log = logging.getLogger(__name__)


class MixerKind(enum.Enum):
    X = "x"
    XY_SIMPLE = "xy-simple"
    XZ_SIMPLE = "xz-simple"
    XY_SHORT = "xy-short"
    XZ_SHORT = "xz-short"
    XY_LONG = "xy-long"
    XZ_LONG = "xz-long"

    @classmethod
    def parse(cls, value: "str | MixerKind") -> "MixerKind":
        if isinstance(value, MixerKind):
            return value
        return cls(str(value).lower().replace("_", "-"))

    @property
    def family(self) -> str:
        """``"x"``, ``"xy"`` or ``"xz"``."""
        return self.value.split("-")[0]

    @property
    def feasibility_mode(self) -> str | None:
        return {"xy": XY, "xz": XZ}.get(self.family)

    @property
    def guards_short_range(self) -> bool:
        return self.value.endswith(("-short", "-long"))

    @property
    def guards_long_range(self) -> bool:
        return self.value.endswith("-long")


ALL_MIXERS = tuple(MixerKind)

STRADDLING = "straddling"
LITERAL = "literal"


@dataclass(eq=False)
class MixerHamiltonian:
    kind: MixerKind
    pauli: PauliSum
    encoding: Encoding
    _sparse: sp.csr_matrix | None = field(default=None, repr=False)

    @property
    def n_qubits(self) -> int:
        return self.pauli.n_qubits

    def to_sparse(self) -> sp.csr_matrix:
        if self._sparse is None:
            self._sparse = self.pauli.to_sparse()
        return self._sparse

    @cached_property
    def sorted_terms(self) -> list[tuple[str, float]]:
        return self.pauli.sorted_terms()


# ---------------------------------------------------------------------------
# building blocks


def swap_term(n_qubits: int, i: int, j: int) -> PauliSum:
    """``(X_i X_j + Y_i Y_j) / 2``: exchanges |01> and |10>, kills |00> and |11>."""
    if i == j:
        raise ValueError("swap needs two distinct qubits")
    return PauliSum(
        n_qubits,
        {
            _letters(n_qubits, {i: "X", j: "X"}): 0.5,
            _letters(n_qubits, {i: "Y", j: "Y"}): 0.5,
        },
    )


def _letters(n: int, ops: dict[int, str]) -> str:
    out = ["I"] * n
    for q, p in ops.items():
        out[q] = p
    return "".join(out)


def _not(poly: BooleanPolynomial) -> BooleanPolynomial:
    return 1 - poly


def _tuple_empty_except(e: Encoding, t: int, k: int) -> BooleanPolynomial:
    """1 iff every slot of turn ``t`` other than ``k`` is 0."""
    return product(_not(e.flag_polynomial(t, ko)) for ko in range(e.lattice.n_dirs) if ko != k)


def flip_term(e: Encoding, t: int, k: int) -> PauliSum:
    """Flip ``q_{t,k}`` only when the rest of turn ``t`` is all zero."""
    q = e.qubit(t, k)
    if q is None:
        raise ValueError(f"slot (turn {t}, direction {k}) is fixed, not a qubit")
    x = PauliSum.from_ops(e.n_qubits, {q: "X"})
    return x * to_pauli(_tuple_empty_except(e, t, k), e.n_qubits)


def _neighbour_control(e: Encoding, t: int, dirs: tuple[int, ...]) -> BooleanPolynomial:
    """1 iff neither neighbouring turn goes opposite to any of ``dirs``."""
    lat = e.lattice
    factors = []
    for j in (t - 1, t + 1):
        if not 0 <= j <= e.n_turns:
            continue
        for k in dirs:
            factors.append(_not(e.flag_polynomial(j, lat.opposite(k))))
    return product(factors)


def _flags_with_turn(e: Encoding, t: int, dest: int) -> Callable[[int, int], BooleanPolynomial]:
    def flag(p: int, k: int) -> BooleanPolynomial:
        if p == t:
            return BooleanPolynomial.constant(int(k == dest))
        return e.flag_polynomial(p, k)

    return flag


def squared_distance_polynomial(
    e: Encoding, a: int, b: int, flag: Callable[[int, int], BooleanPolynomial] | None = None
) -> BooleanPolynomial:
    """Squared lattice distance between residues ``a`` and ``b`` as a polynomial."""
    if flag is None:
        flag = e.flag_polynomial
    lo, hi = min(a, b), max(a, b)
    lat = e.lattice
    total = BooleanPolynomial()
    for axis in range(lat.dims):
        disp = BooleanPolynomial()
        for p in range(lo, hi):
            disp = disp + flag(p, axis) - flag(p, lat.opposite(axis))
        total = total + disp * disp
    return total


def _long_range_pairs(e: Encoding, t: int, scheme: str) -> list[tuple[int, int]]:
    n = e.n_residues
    if scheme == STRADDLING:
        return [(a, b) for a, b in overlap_pairs(n, 4) if a <= t < b]
    if scheme == LITERAL:
        # product over i = 0..N-5 of D_{i,t+1} wherever (i - t) is odd;
        # i = t + 1 would be a self-distance (always 0) and is skipped
        return [(i, t + 1) for i in range(0, n - 4) if (i - t) % 2 == 1 and i != t + 1]
    raise ValueError(f"unknown long-range scheme {scheme!r}")


def _distance_control(e: Encoding, t: int, dest: int, scheme: str) -> BooleanPolynomial:
    flag = _flags_with_turn(e, t, dest)
    return product(
        squared_distance_polynomial(e, a, b, flag) for a, b in _long_range_pairs(e, t, scheme)
    )


# ---------------------------------------------------------------------------
# mixers


def _x_mixer(e: Encoding) -> PauliSum:
    n = e.n_qubits
    return pauli_sum(n, (PauliSum.from_ops(n, {q: "X"}) for q in range(n)))


def _xy_mixer(e: Encoding, short: bool, long: bool, scheme: str) -> PauliSum:
    n = e.n_qubits
    pieces = []
    for t in range(1, e.n_turns + 1):
        dirs = [k for k in range(e.lattice.n_dirs) if e.qubit(t, k) is not None]
        for ia, ka in enumerate(dirs):
            for kb in dirs[ia + 1 :]:
                kernel = swap_term(n, e.qubit(t, ka), e.qubit(t, kb))
                if not short:
                    pieces.append(kernel)
                    continue
                # both endpoints of the swap must be safe, so control on both
                control = _neighbour_control(e, t, (ka, kb))
                if long:
                    control = control * _distance_control(e, t, ka, scheme)
                    control = control * _distance_control(e, t, kb, scheme)
                if control.is_zero():
                    continue
                pieces.append(kernel * to_pauli(control, n))
    return pauli_sum(n, pieces)


def _xz_mixer(e: Encoding, short: bool, long: bool, scheme: str) -> PauliSum:
    n = e.n_qubits
    pieces = []
    for t in range(1, e.n_turns + 1):
        for k in range(e.lattice.n_dirs):
            q = e.qubit(t, k)
            if q is None:
                continue
            control = _tuple_empty_except(e, t, k)
            if short:
                control = control * _neighbour_control(e, t, (k,))
            if long:
                control = control * _distance_control(e, t, k, scheme)
            if control.is_zero():
                continue
            pieces.append(PauliSum.from_ops(n, {q: "X"}) * to_pauli(control, n))
    return pauli_sum(n, pieces)


def build_mixer(
    e: Encoding, kind: "str | MixerKind", long_range_scheme: str = STRADDLING
) -> MixerHamiltonian:
    """Build one of the seven mixers on encoding ``e``.

    ``long_range_scheme`` picks the residue pairs whose squared distance
    gates the long-range mixers: ``"straddling"`` uses every even-separated
    pair (separation >= 4) on opposite sides of the moved turn; ``"literal"``
    uses the pairs ``(i, t + 1)`` for ``i <= N - 5`` with ``i - t`` odd.
    """
    kind = MixerKind.parse(kind)
    if kind.guards_long_range and e.n_residues < 5:
        log.info("%s on %d residues has no long-range controls", kind.value, e.n_residues)
    fam = kind.family
    if fam == "x":
        pauli = _x_mixer(e)
    else:
        short = kind.guards_short_range
        long = kind.guards_long_range
        builder = _xy_mixer if fam == "xy" else _xz_mixer
        pauli = builder(e, short, long, long_range_scheme)
    return MixerHamiltonian(kind, pauli, e)


def _operator(op) -> sp.spmatrix:
    if isinstance(op, CostHamiltonian):
        return sp.diags(op.diagonal()).tocsr()
    if isinstance(op, MixerHamiltonian):
        return op.to_sparse()
    if isinstance(op, PauliSum):
        return op.to_sparse()
    raise TypeError(f"cannot use {type(op).__name__} as an operator")


def commutator_norm(a, b, seed: int = 0) -> float:
    """``||[A, B] v||`` for a seeded random unit vector ``v``."""
    ma, mb = _operator(a), _operator(b)
    if ma.shape != mb.shape:
        raise ValueError("operators act on different qubit counts")
    rng = np.random.default_rng(seed)
    dim = ma.shape[0]
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return float(np.linalg.norm(ma @ (mb @ v) - mb @ (ma @ v)))


def commutator_nonzero(h_c, h_m, tol: float = 1e-9) -> bool:
    return commutator_norm(h_c, h_m) > tol
