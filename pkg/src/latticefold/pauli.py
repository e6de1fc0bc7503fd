"""Real-weighted sums of Pauli strings.

Strings are ``str`` of ``I/X/Y/Z`` letters, one per qubit, qubit 0 leftmost.
Basis states follow the same big-endian convention: qubit ``i`` is bit
``n - 1 - i`` of the state index.
"""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

# (a, b) -> (phase, a*b) for single-qubit Paulis
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_ZERO_TOL = 1e-12


def _multiply_strings(a: str, b: str) -> tuple[complex, str]:
    phase: complex = 1
    letters = []
    for x, y in zip(a, b):
        ph, z = _PRODUCT[(x, y)]
        phase *= ph
        letters.append(z)
    return phase, "".join(letters)


class PauliSum:
    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits: int, terms: Mapping[str, float] | None = None):
        self.n_qubits = int(n_qubits)
        self.terms: dict[str, float] = {}
        for s, c in (terms or {}).items():
            if len(s) != self.n_qubits or set(s) - set("IXYZ"):
                raise ValueError(f"bad Pauli string {s!r} for {self.n_qubits} qubits")
            c = complex(c)
            if abs(c.imag) > _ZERO_TOL:
                raise ValueError(f"non-real coefficient {c} on {s}; operator is not Hermitian")
            if abs(c.real) > _ZERO_TOL:
                self.terms[s] = self.terms.get(s, 0.0) + c.real

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int, coeff: float = 1.0) -> "PauliSum":
        return cls(n_qubits, {"I" * n_qubits: coeff})

    @classmethod
    def from_ops(cls, n_qubits: int, ops: Mapping[int, str], coeff: float = 1.0) -> "PauliSum":
        letters = ["I"] * n_qubits
        for q, p in ops.items():
            letters[q] = p
        return cls(n_qubits, {"".join(letters): coeff})

    # -- algebra ---------------------------------------------------------

    def _check(self, other: "PauliSum"):
        if other.n_qubits != self.n_qubits:
            raise ValueError(f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = PauliSum.identity(self.n_qubits, other)
        self._check(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0.0) + c
        return PauliSum(self.n_qubits, out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return PauliSum(self.n_qubits, {s: c * other for s, c in self.terms.items()})
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        out: dict[str, complex] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                ph, s = _multiply_strings(a, b)
                out[s] = out.get(s, 0.0) + ph * ca * cb
        return PauliSum(self.n_qubits, out)

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, PauliSum) or other.n_qubits != self.n_qubits:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(abs(c - other.terms[s]) <= _ZERO_TOL for s, c in self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        body = " + ".join(f"{c:g}*{s}" for s, c in sorted(self.terms.items()))
        return f"PauliSum({self.n_qubits}, {body or '0'})"

    # -- structure -------------------------------------------------------

    def is_diagonal(self) -> bool:
        return all(set(s) <= {"I", "Z"} for s in self.terms)

    def support(self, string: str) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(string) if p != "I")

    def locality(self) -> int:
        return max((len(self.support(s)) for s in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[str, float]]:
        return sorted(self.terms.items())

    # -- matrices --------------------------------------------------------

    def _masks(self, string: str) -> tuple[int, int, int]:
        n = self.n_qubits
        x_mask = z_mask = 0
        n_y = 0
        for i, p in enumerate(string):
            bit = 1 << (n - 1 - i)
            if p in "XY":
                x_mask |= bit
            if p in "ZY":
                z_mask |= bit
            if p == "Y":
                n_y += 1
        return x_mask, z_mask, n_y

    def term_action(self, string: str) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(targets, phases)`` with ``P|b> = phases[b] |targets[b]>``."""
        dim = 1 << self.n_qubits
        idx = np.arange(dim, dtype=np.int64)
        x_mask, z_mask, n_y = self._masks(string)
        phases = (1j**n_y) * (1 - 2 * (np.bitwise_count(idx & z_mask) & 1).astype(np.int8))
        return idx ^ x_mask, phases

    def diagonal(self) -> np.ndarray:
        """Eigenvalue on every basis state of a diagonal (I/Z only) operator."""
        if not self.is_diagonal():
            raise ValueError("operator is not diagonal")
        coeffs = np.zeros(1 << self.n_qubits)
        for s, c in self.terms.items():
            coeffs[self._masks(s)[1]] += c
        return walsh_hadamard(coeffs, self.n_qubits, normalize=False)

    def off_diagonal_blocks(self) -> dict[int, np.ndarray]:
        """Group terms by X mask: ``{x_mask: d}`` with ``H|b> = sum_x d_x[b] |b ^ x>``."""
        n = self.n_qubits
        dim = 1 << n
        groups: dict[int, list[tuple[int, complex]]] = {}
        for s, c in self.terms.items():
            x_mask, z_mask, n_y = self._masks(s)
            groups.setdefault(x_mask, []).append((z_mask, c * (1j**n_y)))
        idx = np.arange(dim, dtype=np.int64)
        out = {}
        for x_mask, items in groups.items():
            if len(items) > 2 * n:
                coeffs = np.zeros(dim, dtype=complex)
                for z_mask, c in items:
                    coeffs[z_mask] += c
                vals = walsh_hadamard(coeffs.real, n, normalize=False) + 1j * walsh_hadamard(
                    coeffs.imag, n, normalize=False
                )
            else:
                vals = np.zeros(dim, dtype=complex)
                for z_mask, c in items:
                    vals += c * (1 - 2 * (np.bitwise_count(idx & z_mask) & 1).astype(np.int8))
            out[x_mask] = vals
        return out

    def to_sparse(self) -> sp.csr_matrix:
        dim = 1 << self.n_qubits
        idx = np.arange(dim, dtype=np.int64)
        rows, cols, vals = [], [], []
        for x_mask, d in self.off_diagonal_blocks().items():
            keep = np.abs(d) > _ZERO_TOL
            rows.append((idx ^ x_mask)[keep])
            cols.append(idx[keep])
            vals.append(d[keep])
        if not rows:
            return sp.csr_matrix((dim, dim), dtype=complex)
        m = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        ).tocsr()
        m.sum_duplicates()
        return m

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec, dtype=complex)
        for s, c in self.terms.items():
            targets, phases = self.term_action(s)
            out[targets] += c * phases * vec
        return out

    # -- text format -----------------------------------------------------

    def to_text(self) -> str:
        return "".join(f"{c:.17g} {s}\n" for s, c in self.sorted_terms())

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> "PauliSum":
        terms: dict[str, float] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                coeff, letters = line.split()
                value = float(coeff)
            except ValueError:
                raise ValueError(f"line {lineno}: expected '<coeff> <letters>'") from None
            if n_qubits is None:
                n_qubits = len(letters)
            terms[letters] = terms.get(letters, 0.0) + value
        return cls(n_qubits or 0, terms)


def walsh_hadamard(values: np.ndarray, n: int, normalize: bool = True) -> np.ndarray:
    """Fast Walsh-Hadamard transform over ``n`` bits.

    With ``normalize`` it maps basis-state eigenvalues to Z-string coefficients
    (entry ``m`` belongs to the Z string with big-endian mask ``m``); without
    it, it maps coefficients back to eigenvalues.
    """
    w = np.array(values, dtype=float)
    for i in range(n):
        w = w.reshape(-1, 2, 1 << i)
        a, b = w[:, 0, :].copy(), w[:, 1, :].copy()
        w[:, 0, :] = a + b
        w[:, 1, :] = a - b
        w = w.reshape(-1)
    return w / (1 << n) if normalize else w


def pauli_sum(n_qubits: int, pieces: Iterable[PauliSum]) -> PauliSum:
    out: dict[str, float] = {}
    for p in pieces:
        for s, c in p.terms.items():
            out[s] = out.get(s, 0.0) + c
    return PauliSum(n_qubits, out)
