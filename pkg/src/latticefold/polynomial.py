"""Multilinear polynomials over binary variables.

Monomials are frozensets of variable indices; ``q * q == q`` is applied on
every product, so every polynomial is the unique multilinear form of the
pseudo-boolean function it represents.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Number = Union[int, float]

_ZERO_TOL = 1e-12


class BooleanPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[frozenset, float] | None = None):
        self.terms: dict[frozenset, float] = {}
        if terms:
            for mono, c in terms.items():
                c = float(c)
                if abs(c) > _ZERO_TOL:
                    self.terms[frozenset(mono)] = c

    @classmethod
    def constant(cls, value: Number) -> "BooleanPolynomial":
        return cls({frozenset(): value})

    @classmethod
    def variable(cls, index: int) -> "BooleanPolynomial":
        return cls({frozenset((int(index),)): 1.0})

    # -- algebra ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "BooleanPolynomial":
        if isinstance(other, BooleanPolynomial):
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return BooleanPolynomial.constant(float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0.0) + c
        return BooleanPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return BooleanPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return BooleanPolynomial({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[frozenset, float] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 | m2
                out[m] = out.get(m, 0.0) + c1 * c2
        return BooleanPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = BooleanPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(abs(c - other.terms[m]) <= _ZERO_TOL for m, c in self.terms.items())

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "BooleanPolynomial(0)"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (len(m), sorted(m))):
            c = self.terms[mono]
            name = "*".join(f"q{i}" for i in sorted(mono)) or "1"
            parts.append(f"{c:+g}*{name}")
        return "BooleanPolynomial(" + " ".join(parts) + ")"

    # -- inspection ------------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    @property
    def constant_term(self) -> float:
        return self.terms.get(frozenset(), 0.0)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out |= m
        return out

    # -- evaluation ------------------------------------------------------

    def evaluate(self, bits: Sequence[int] | str) -> float:
        if isinstance(bits, str):
            bits = [int(b) for b in bits if not b.isspace()]
        total = 0.0
        for mono, c in self.terms.items():
            if all(bits[i] for i in mono):
                total += c
        return total

    def evaluate_all(self, bit_matrix: np.ndarray) -> np.ndarray:
        """Evaluate on every row of a ``(rows, n)`` 0/1 matrix."""
        bit_matrix = np.asarray(bit_matrix, dtype=bool)
        out = np.zeros(bit_matrix.shape[0])
        for mono, c in self.terms.items():
            if not mono:
                out += c
                continue
            idx = list(mono)
            out += c * np.all(bit_matrix[:, idx], axis=1)
        return out

    def substitute(self, assignment: Mapping[int, int]) -> "BooleanPolynomial":
        """Fix some variables to 0/1 constants."""
        out: dict[frozenset, float] = {}
        for mono, c in self.terms.items():
            keep = []
            dead = False
            for i in mono:
                if i in assignment:
                    if not assignment[i]:
                        dead = True
                        break
                else:
                    keep.append(i)
            if dead:
                continue
            m = frozenset(keep)
            out[m] = out.get(m, 0.0) + c
        return BooleanPolynomial(out)


def as_poly(value) -> BooleanPolynomial:
    if isinstance(value, BooleanPolynomial):
        return value
    return BooleanPolynomial.constant(value)


def xnor(p, q) -> BooleanPolynomial:
    """1 when p == q on 0/1 inputs: ``1 - p - q + 2pq``."""
    p, q = as_poly(p), as_poly(q)
    return 1 - p - q + 2 * (p * q)


def xor(p, q) -> BooleanPolynomial:
    p, q = as_poly(p), as_poly(q)
    return p + q - 2 * (p * q)


def product(polys: Iterable) -> BooleanPolynomial:
    out = BooleanPolynomial.constant(1)
    for p in polys:
        out = out * as_poly(p)
        if out.is_zero():
            break
    return out
