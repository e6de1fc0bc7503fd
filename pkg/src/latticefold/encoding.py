"""One-hot turn encoding: qubit layout, bitstring conversion, feasibility.

Every turn ``t`` in ``1..N-2`` owns one slot per lattice direction. A slot is
either a qubit index or a :class:`Fixed` constant. Turn 0 is not encoded (it
is always RIGHT), turn 1 may only be RIGHT or UP, and on the cubic lattice
turn 2 may not go BACK.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .lattice import RIGHT, UP, Conformation, LatticeKind
from .polynomial import BooleanPolynomial

XY = "xy"
XZ = "xz"
MODES = (XY, XZ)


@dataclass(frozen=True)
class Fixed:
    value: int


Slot = Union[int, Fixed]
Bits = Union[str, Sequence[int]]


@dataclass(frozen=True, eq=False)
class Encoding:
    lattice: LatticeKind
    n_residues: int
    slots: tuple[tuple[Slot, ...], ...]  # slots[t - 1][k] for t = 1..N-2
    n_qubits: int

    @property
    def n_turns(self) -> int:
        """Number of encoded turns (``N - 2``)."""
        return len(self.slots)

    def turn_slots(self, t: int) -> tuple[Slot, ...]:
        if not 1 <= t <= self.n_turns:
            raise IndexError(f"turn {t} is not encoded (valid: 1..{self.n_turns})")
        return self.slots[t - 1]

    def qubit(self, t: int, k: int) -> int | None:
        s = self.turn_slots(t)[k]
        return s if isinstance(s, int) else None

    def turn_qubits(self, t: int) -> list[int]:
        return [s for s in self.turn_slots(t) if isinstance(s, int)]

    def qubit_owner(self) -> dict[int, tuple[int, int]]:
        """Map qubit index -> (turn, direction)."""
        out = {}
        for t, row in enumerate(self.slots, 1):
            for k, s in enumerate(row):
                if isinstance(s, int):
                    out[s] = (t, k)
        return out

    @cached_property
    def fixed_turn1(self) -> int | None:
        row = self.slots[0]
        if any(isinstance(s, int) for s in row):
            return None
        for k, s in enumerate(row):
            if s.value == 1:
                return k
        return None

    def __eq__(self, other):
        return (
            isinstance(other, Encoding)
            and self.lattice is other.lattice
            and self.n_residues == other.n_residues
            and self.slots == other.slots
        )

    def __hash__(self):
        return hash((self.lattice, self.n_residues, self.slots))

    # -- flags -----------------------------------------------------------

    def flag_polynomial(self, t: int, k: int) -> BooleanPolynomial:
        """d^t_k as a polynomial; turn 0 resolves to the fixed RIGHT move."""
        if not 0 <= k < self.lattice.n_dirs:
            raise IndexError(f"direction {k} out of range")
        if t == 0:
            return BooleanPolynomial.constant(1 if k == RIGHT else 0)
        s = self.turn_slots(t)[k]
        if isinstance(s, Fixed):
            return BooleanPolynomial.constant(s.value)
        return BooleanPolynomial.variable(s)

    def direction_flag(self, t: int, k: int, bits: Bits) -> int:
        b = check_bits(self, bits)
        if not 0 <= k < self.lattice.n_dirs:
            raise IndexError(f"direction {k} out of range")
        s = self.turn_slots(t)[k]
        return s.value if isinstance(s, Fixed) else int(b[s])

    def turn_tuple(self, t: int, bits: Bits) -> tuple[int, ...]:
        b = check_bits(self, bits)
        return tuple(s.value if isinstance(s, Fixed) else int(b[s]) for s in self.turn_slots(t))

    # -- rendering -------------------------------------------------------

    def format(self, bits: Bits) -> str:
        """Human-readable form with a space between turn tuples."""
        b = check_bits(self, bits)
        groups = []
        for t in range(1, self.n_turns + 1):
            qs = self.turn_qubits(t)
            if qs:
                groups.append("".join(str(b[q]) for q in qs))
        return " ".join(groups)

    @cached_property
    def basis_bits(self) -> np.ndarray:
        return basis_bits(self.n_qubits)


def build_encoding(
    lattice: "str | LatticeKind", n_residues: int, turn1: int | None = None
) -> Encoding:
    """Slot table for ``n_residues``; ``turn1`` fixes the second move outright."""
    lattice = LatticeKind.parse(lattice)
    if n_residues < 4:
        raise ValueError(f"need at least 4 residues, got {n_residues}")
    if turn1 is not None and turn1 not in (RIGHT, UP):
        raise ValueError("turn 1 can only be fixed to RIGHT or UP")
    n = lattice.n_dirs
    next_qubit = 0
    slots = []
    for t in range(1, n_residues - 1):
        row: list[Slot] = []
        for k in range(n):
            if t == 1:
                if turn1 is not None:
                    row.append(Fixed(int(k == turn1)))
                    continue
                if k not in (RIGHT, UP):
                    row.append(Fixed(0))
                    continue
            elif t == 2 and lattice is LatticeKind.CUBIC and k == 5:
                row.append(Fixed(0))
                continue
            row.append(next_qubit)
            next_qubit += 1
        slots.append(tuple(row))
    return Encoding(lattice, n_residues, tuple(slots), next_qubit)


# ---------------------------------------------------------------------------
# bitstrings


def check_bits(e: Encoding, bits: Bits) -> list[int]:
    if isinstance(bits, str):
        b = [int(c) for c in bits if not c.isspace()]
    else:
        b = [int(x) for x in bits]
    if len(b) != e.n_qubits:
        raise ValueError(f"bitstring has {len(b)} bits, encoding needs {e.n_qubits}")
    if any(x not in (0, 1) for x in b):
        raise ValueError("bitstring entries must be 0 or 1")
    return b


def bits_to_index(bits: Bits) -> int:
    b = [c for c in bits if not str(c).isspace()] if isinstance(bits, str) else list(bits)
    idx = 0
    for x in b:
        idx = (idx << 1) | int(x)
    return idx


def index_to_bits(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b") if n_qubits else ""


def basis_bits(n_qubits: int) -> np.ndarray:
    """``(2**n, n)`` uint8 matrix; row ``i`` is the bitstring of basis state ``i``."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    shifts = np.arange(n_qubits - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def tuple_weights(e: Encoding, bit_matrix: np.ndarray) -> np.ndarray:
    """Hamming weight of every turn tuple, shape ``(rows, N-2)``."""
    out = np.zeros((bit_matrix.shape[0], e.n_turns), dtype=np.int64)
    for t in range(1, e.n_turns + 1):
        for s in e.turn_slots(t):
            if isinstance(s, Fixed):
                out[:, t - 1] += s.value
            else:
                out[:, t - 1] += bit_matrix[:, s]
    return out


def feasible_mask(e: Encoding, mode: str = XY) -> np.ndarray:
    w = tuple_weights(e, e.basis_bits)
    if mode == XY:
        return np.all(w == 1, axis=1)
    if mode == XZ:
        return np.all(w <= 1, axis=1)
    raise ValueError(f"unknown feasibility mode {mode!r}")


# ---------------------------------------------------------------------------
# conversion


def decode(e: Encoding, bits: Bits) -> Conformation | None:
    """Turn sequence for a one-hot bitstring, ``None`` if any tuple is not one-hot."""
    turns = [RIGHT]
    for t in range(1, e.n_turns + 1):
        tup = e.turn_tuple(t, bits)
        if sum(tup) != 1:
            return None
        turns.append(tup.index(1))
    return Conformation(e.lattice, tuple(turns))


def encode(e: Encoding, conf: Conformation) -> str:
    if conf.lattice is not e.lattice:
        raise ValueError("conformation lattice does not match the encoding")
    if conf.n_residues != e.n_residues:
        raise ValueError(
            f"conformation has {conf.n_residues} residues, encoding expects {e.n_residues}"
        )
    bits = [0] * e.n_qubits
    for t in range(1, e.n_turns + 1):
        k = conf.turns[t]
        for kk, s in enumerate(e.turn_slots(t)):
            want = int(kk == k)
            if isinstance(s, Fixed):
                if s.value != want:
                    names = e.lattice.direction_names
                    raise ValueError(
                        f"turn {t} = {names[k]} is excluded by the encoding's fixed prefix"
                    )
            else:
                bits[s] = want
    return "".join(map(str, bits))


def is_feasible(e: Encoding, bits: Bits, mode: str = XY) -> bool:
    if mode not in MODES:
        raise ValueError(f"unknown feasibility mode {mode!r}")
    for t in range(1, e.n_turns + 1):
        w = sum(e.turn_tuple(t, bits))
        if w > 1 or (mode == XY and w == 0):
            return False
    return True


def _turn_options(e: Encoding, t: int, mode: str) -> list[dict[int, int]]:
    """All assignments of turn ``t``'s qubits that respect its fixed bits."""
    row = e.turn_slots(t)
    fixed_ones = sum(1 for s in row if isinstance(s, Fixed) and s.value == 1)
    qubits = [s for s in row if isinstance(s, int)]
    options = []
    if fixed_ones == 1:
        options.append({q: 0 for q in qubits})
    elif fixed_ones == 0:
        if mode == XZ:
            options.append({q: 0 for q in qubits})
        for hot in qubits:
            options.append({q: int(q == hot) for q in qubits})
    return options


def feasible_states(e: Encoding, mode: str = XY) -> list[str]:
    if mode not in MODES:
        raise ValueError(f"unknown feasibility mode {mode!r}")
    per_turn = [_turn_options(e, t, mode) for t in range(1, e.n_turns + 1)]
    out = []
    for combo in itertools.product(*per_turn):
        bits = [0] * e.n_qubits
        for assignment in combo:
            for q, v in assignment.items():
                bits[q] = v
        out.append("".join(map(str, bits)))
    return sorted(out)
