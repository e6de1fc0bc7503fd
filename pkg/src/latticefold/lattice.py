"""Lattice geometry, fold energies and the brute-force fold enumerator.

Residues are indexed ``0..N-1`` and turns ``0..N-2``; turn ``t`` moves
residue ``t`` onto residue ``t + 1``. Turn 0 is always RIGHT.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np


class LatticeKind(enum.Enum):
    PLANAR = "planar"
    CUBIC = "cubic"

    @property
    def dims(self) -> int:
        return 2 if self is LatticeKind.PLANAR else 3

    @property
    def n_dirs(self) -> int:
        return 2 * self.dims

    @property
    def direction_names(self) -> tuple[str, ...]:
        if self is LatticeKind.PLANAR:
            return ("R", "U", "L", "D")
        return ("R", "U", "F", "L", "D", "B")

    @property
    def unit_vectors(self) -> np.ndarray:
        """Row ``k`` is the lattice step of direction ``k``."""
        d = self.dims
        eye = np.eye(d, dtype=int)
        return np.vstack([eye, -eye])

    def opposite(self, k: int) -> int:
        return (k + self.dims) % self.n_dirs

    def axis(self, k: int) -> int:
        return k % self.dims

    def direction(self, name: str) -> int:
        try:
            return self.direction_names.index(name.upper())
        except ValueError:
            raise ValueError(f"unknown {self.value} direction {name!r}") from None

    @classmethod
    def parse(cls, value: "str | LatticeKind") -> "LatticeKind":
        if isinstance(value, LatticeKind):
            return value
        return cls(str(value).lower())


RIGHT, UP = 0, 1


@dataclass(frozen=True)
class Conformation:
    """A lattice walk given by its turn directions (turn 0 included)."""

    lattice: LatticeKind
    turns: tuple[int, ...]

    def __post_init__(self):
        turns = tuple(int(k) for k in self.turns)
        object.__setattr__(self, "turns", turns)
        if len(turns) < 1:
            raise ValueError("a conformation needs at least one turn")
        if any(not 0 <= k < self.lattice.n_dirs for k in turns):
            raise ValueError(f"turn direction out of range in {turns}")
        if turns[0] != RIGHT:
            raise ValueError("turn 0 must be RIGHT")

    @classmethod
    def from_string(cls, lattice: "str | LatticeKind", turns: str) -> "Conformation":
        lattice = LatticeKind.parse(lattice)
        names = [c for c in turns if not c.isspace() and c not in ",[]"]
        return cls(lattice, tuple(lattice.direction(c) for c in names))

    @property
    def n_residues(self) -> int:
        return len(self.turns) + 1

    def is_canonical(self) -> bool:
        """True when the walk obeys the fixed symmetry prefix of the encoding."""
        if len(self.turns) > 1 and self.turns[1] not in (RIGHT, UP):
            return False
        if self.lattice is LatticeKind.CUBIC and len(self.turns) > 2 and self.turns[2] == 5:
            return False
        return True

    def __str__(self) -> str:
        return "".join(self.lattice.direction_names[k] for k in self.turns)


def coordinates(conf: Conformation) -> np.ndarray:
    """Integer lattice points of every residue, shape ``(N, D)``."""
    steps = conf.lattice.unit_vectors[list(conf.turns)]
    points = np.zeros((conf.n_residues, conf.lattice.dims), dtype=int)
    np.cumsum(steps, axis=0, out=points[1:])
    return points


def squared_distance(conf: Conformation, j: int, k: int) -> int:
    n = conf.n_residues
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"residue index out of range for N={n}: ({j}, {k})")
    pts = coordinates(conf)
    diff = pts[j] - pts[k]
    return int(diff @ diff)


def is_self_avoiding(conf: Conformation) -> bool:
    pts = coordinates(conf)
    return len({tuple(p) for p in pts}) == len(pts)


def contact_pairs(n_residues: int) -> Iterator[tuple[int, int]]:
    """Residue pairs that can be lattice neighbours without being bonded."""
    for a in range(n_residues):
        for b in range(a + 3, n_residues, 2):
            yield a, b


def overlap_pairs(n_residues: int, min_separation: int = 2) -> Iterator[tuple[int, int]]:
    """Residue pairs on the same sublattice, i.e. the ones that can coincide."""
    start = min_separation + (min_separation % 2)
    for a in range(n_residues):
        for b in range(a + start, n_residues, 2):
            yield a, b


# ---------------------------------------------------------------------------
# interaction models


@dataclass(frozen=True)
class InteractionModel:
    """Symmetric contact-energy table keyed by residue label pairs."""

    kind: str
    labels: tuple[str, ...]
    energies: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.shape != (len(self.labels), len(self.labels)):
            raise ValueError(
                f"energy matrix shape {e.shape} does not match {len(self.labels)} labels"
            )
        if not np.allclose(e, e.T, atol=0.0, rtol=0.0):
            raise ValueError("interaction matrix must be symmetric")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate residue labels")
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def hp(cls) -> "InteractionModel":
        return cls("HP", ("H", "P"), np.array([[-1.0, 0.0], [0.0, 0.0]]))

    @classmethod
    def from_mapping(cls, table: Mapping[tuple[str, str], float], kind: str = "Matrix"):
        labels = sorted({a for pair in table for a in pair})
        idx = {lab: i for i, lab in enumerate(labels)}
        e = np.zeros((len(labels), len(labels)))
        for (a, b), v in table.items():
            e[idx[a], idx[b]] = v
            e[idx[b], idx[a]] = v
        return cls(kind, tuple(labels), e)

    @classmethod
    def from_json(cls, path: "str | Path") -> "InteractionModel":
        """Load ``{"labels": [...], "energies": [[...], ...]}``."""
        with open(path) as fh:
            doc = json.load(fh)
        try:
            labels, energies = doc["labels"], doc["energies"]
        except (KeyError, TypeError):
            raise ValueError(f"{path}: expected keys 'labels' and 'energies'") from None
        return cls("Matrix", tuple(str(x) for x in labels), np.array(energies, dtype=float))

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "energies": self.energies.tolist()}

    def energy(self, a: str, b: str) -> float:
        idx = self._index
        return float(self.energies[idx[a], idx[b]])

    @property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}


@dataclass(frozen=True)
class ProteinInstance:
    sequence: str
    model: InteractionModel
    lattice: LatticeKind

    def __post_init__(self):
        object.__setattr__(self, "lattice", LatticeKind.parse(self.lattice))
        seq = "".join(self.sequence.split())
        object.__setattr__(self, "sequence", seq)
        if len(seq) < 4:
            raise ValueError(f"need at least 4 residues, got {len(seq)}")
        unknown = sorted(set(seq) - set(self.model.labels))
        if unknown:
            raise ValueError(f"residue labels {unknown} are not in the interaction model")

    @property
    def n_residues(self) -> int:
        return len(self.sequence)

    def pair_energy(self, a: int, b: int) -> float:
        return self.model.energy(self.sequence[a], self.sequence[b])

    def interaction_pairs(self) -> list[tuple[int, int, float]]:
        """Contact-eligible pairs with a non-zero interaction."""
        out = []
        for a, b in contact_pairs(self.n_residues):
            p = self.pair_energy(a, b)
            if p != 0.0:
                out.append((a, b, p))
        return out


def _energy_of_points(instance: ProteinInstance, points: np.ndarray) -> float:
    total = 0.0
    for a, b in contact_pairs(instance.n_residues):
        diff = points[a] - points[b]
        if int(diff @ diff) == 1:
            total += instance.pair_energy(a, b)
    return total


def classical_energy(instance: ProteinInstance, conf: Conformation) -> float:
    if conf.n_residues != instance.n_residues:
        raise ValueError(
            f"conformation has {conf.n_residues} residues, instance has {instance.n_residues}"
        )
    if conf.lattice is not instance.lattice:
        raise ValueError("conformation and instance live on different lattices")
    if not is_self_avoiding(conf):
        raise ValueError(f"conformation {conf} is not self-avoiding")
    return _energy_of_points(instance, coordinates(conf))


# ---------------------------------------------------------------------------
# exhaustive enumeration


@dataclass(frozen=True)
class FoldEnumeration:
    folds: tuple[tuple[Conformation, float], ...]
    ground_energy: float
    ground_states: tuple[Conformation, ...]

    def __len__(self) -> int:
        return len(self.folds)


DEFAULT_ENUMERATION_CAP = 10**7


def _allowed_turns(lattice: LatticeKind, t: int, turn1: int | None = None) -> Sequence[int]:
    if t == 0:
        return (RIGHT,)
    if t == 1:
        return (RIGHT, UP) if turn1 is None else (turn1,)
    if t == 2 and lattice is LatticeKind.CUBIC:
        return (0, 1, 2, 3, 4)
    return range(lattice.n_dirs)


def iter_self_avoiding_walks(
    lattice: LatticeKind, n_residues: int, turn1: int | None = None
) -> Iterator[Conformation]:
    """Symmetry-fixed self-avoiding walks in lexicographic turn order."""
    vecs = [tuple(v) for v in lattice.unit_vectors]
    origin = (0,) * lattice.dims
    turns: list[int] = []
    path = [origin]
    occupied = {origin}

    def extend(t: int):
        if t == n_residues - 1:
            yield Conformation(lattice, tuple(turns))
            return
        head = path[-1]
        for k in _allowed_turns(lattice, t, turn1):
            nxt = tuple(h + v for h, v in zip(head, vecs[k]))
            if nxt in occupied:
                continue
            turns.append(k)
            path.append(nxt)
            occupied.add(nxt)
            yield from extend(t + 1)
            occupied.discard(nxt)
            path.pop()
            turns.pop()

    yield from extend(0)


def enumerate_folds(
    instance: ProteinInstance,
    cap: int = DEFAULT_ENUMERATION_CAP,
    turn1: int | None = None,
) -> FoldEnumeration:
    """Score every symmetry-fixed self-avoiding fold of ``instance``.

    ``turn1`` restricts the second move to a single direction (used when the
    problem is split on that move).
    """
    lattice, n = instance.lattice, instance.n_residues
    if lattice.n_dirs ** (n - 2) > cap:
        raise ValueError(
            f"enumeration of {n} residues on a {lattice.value} lattice exceeds cap {cap}"
        )
    folds = []
    for conf in iter_self_avoiding_walks(lattice, n, turn1):
        folds.append((conf, _energy_of_points(instance, coordinates(conf))))
    if not folds:
        raise ValueError("no self-avoiding folds exist for this instance")
    ground = min(e for _, e in folds)
    ground_states = tuple(c for c, e in folds if e == ground)
    return FoldEnumeration(tuple(folds), ground, ground_states)
