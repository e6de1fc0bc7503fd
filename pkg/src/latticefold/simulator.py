"""Exact statevector QAOA.

States are plain complex ``numpy`` vectors of length ``2**n`` in the
big-endian basis order used throughout the package.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .encoding import XY, Encoding, encode, feasible_mask
from .hamiltonian import CostHamiltonian
from .lattice import Conformation, enumerate_folds
from .mixers import MixerHamiltonian

MAX_QUBITS_ENV = "LATTICEFOLD_MAX_QUBITS"
DEFAULT_MAX_QUBITS = 26

UNIFORM_ALL = "all"
FEASIBLE = "feasible"


def max_qubits() -> int:
    return int(os.environ.get(MAX_QUBITS_ENV, DEFAULT_MAX_QUBITS))


def _guard(n_qubits: int):
    limit = max_qubits()
    if n_qubits > limit:
        raise ValueError(
            f"{n_qubits} qubits exceeds the statevector limit of {limit} "
            f"(set {MAX_QUBITS_ENV} to override)"
        )


@dataclass(frozen=True)
class QaoaSchedule:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas):
            raise ValueError("gammas and betas must have the same length")

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "QaoaSchedule":
        """``x = [gamma_1..gamma_p, beta_1..beta_p]``."""
        x = list(x)
        if len(x) % 2:
            raise ValueError("parameter vector must have even length")
        p = len(x) // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)


@dataclass(frozen=True)
class EvolutionConfig:
    """How ``exp(-i beta H_M)`` is applied.

    ``mode="exact"`` uses a cached eigendecomposition for small matrices
    (at most ``dense_limit`` rows) and a scaled truncated Taylor series
    otherwise. ``mode="trotter"`` applies per-term exponentials in sorted
    term order, ``steps`` times.
    """

    mode: str = "exact"
    steps: int = 1
    exp_tolerance: float = 1e-10
    subspace_projection: bool = False
    dense_limit: int = 1 << 11
    max_iterations: int = 10_000

    def __post_init__(self):
        if self.mode not in ("exact", "trotter"):
            raise ValueError(f"unknown evolution mode {self.mode!r}")
        if self.steps < 1:
            raise ValueError("trotter steps must be >= 1")
        if self.exp_tolerance <= 0:
            raise ValueError("exp_tolerance must be positive")

    @classmethod
    def parse(cls, text: str) -> "EvolutionConfig":
        """``"exact"`` or ``"trotter:<steps>"``."""
        if text == "exact":
            return cls()
        if text.startswith("trotter"):
            _, _, steps = text.partition(":")
            return cls(mode="trotter", steps=int(steps or 1))
        raise ValueError(f"bad evolution mode {text!r}; use 'exact' or 'trotter:<steps>'")


# ---------------------------------------------------------------------------
# states


def prepare_uniform(n_qubits: int) -> np.ndarray:
    _guard(n_qubits)
    dim = 1 << n_qubits
    return np.full(dim, 1 / math.sqrt(dim), dtype=complex)


def prepare_feasible(e: Encoding, mode: str = XY) -> np.ndarray:
    """Equal superposition of every feasible basis state."""
    _guard(e.n_qubits)
    mask = feasible_mask(e, mode)
    count = int(mask.sum())
    if count == 0:
        raise ValueError("encoding has no feasible states")
    psi = np.zeros(1 << e.n_qubits, dtype=complex)
    psi[mask] = 1 / math.sqrt(count)
    return psi


def _check_dim(psi: np.ndarray, n_qubits: int):
    if psi.shape != (1 << n_qubits,):
        raise ValueError(f"state has shape {psi.shape}, expected ({1 << n_qubits},)")


# ---------------------------------------------------------------------------
# evolutions


def evolve_cost(psi: np.ndarray, h_c: CostHamiltonian, gamma: float) -> np.ndarray:
    _check_dim(psi, h_c.n_qubits)
    return psi * np.exp(-1j * gamma * h_c.diagonal())


class MixerPropagator:
    """Applies ``exp(-i beta H_M)`` and caches whatever that needs."""

    def __init__(self, h_m: MixerHamiltonian, config: EvolutionConfig | None = None):
        self.h_m = h_m
        self.config = config or EvolutionConfig()
        self.dim = 1 << h_m.n_qubits
        self._eig: tuple[np.ndarray, np.ndarray] | None = None
        self._sub_eig: dict[bytes, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        self._trotter: list[tuple[np.ndarray, np.ndarray, float]] | None = None
        self._norm1: float | None = None

    # -- exact -----------------------------------------------------------

    def _eigh(self):
        if self._eig is None:
            h = self.h_m.to_sparse().toarray()
            self._eig = np.linalg.eigh(h)
        return self._eig

    def _apply_eigh(self, psi, beta):
        w, v = self._eigh()
        return v @ (np.exp(-1j * beta * w) * (v.conj().T @ psi))

    def _apply_subspace(self, psi, beta, support: np.ndarray):
        key = support.tobytes()
        if key not in self._sub_eig:
            idx = np.flatnonzero(support)
            block = self.h_m.to_sparse()[idx][:, idx].toarray()
            w, v = np.linalg.eigh(block)
            self._sub_eig[key] = (idx, w, v)
        idx, w, v = self._sub_eig[key]
        out = np.zeros_like(psi)
        out[idx] = v @ (np.exp(-1j * beta * w) * (v.conj().T @ psi[idx]))
        return out

    def _apply_taylor(self, psi, beta):
        cfg = self.config
        h = self.h_m.to_sparse()
        if self._norm1 is None:
            self._norm1 = float(abs(h).sum(axis=0).max()) if h.nnz else 0.0
        scale = abs(beta) * self._norm1
        if scale == 0.0:
            return psi.copy()
        steps = max(1, math.ceil(scale / 2.0))
        dt = beta / steps
        out = psi
        for _ in range(steps):
            term = out
            acc = out.copy()
            for k in range(1, cfg.max_iterations + 1):
                term = (-1j * dt / k) * (h @ term)
                acc += term
                if np.linalg.norm(term) <= cfg.exp_tolerance / steps:
                    break
            else:
                raise RuntimeError(
                    f"Taylor series did not reach tolerance {cfg.exp_tolerance} "
                    f"in {cfg.max_iterations} terms"
                )
            out = acc
        return out

    # -- trotter ---------------------------------------------------------

    def _trotter_terms(self):
        if self._trotter is None:
            pauli = self.h_m.pauli
            self._trotter = []
            for s, c in self.h_m.sorted_terms:
                targets, phases = pauli.term_action(s)
                self._trotter.append((targets, phases, c))
        return self._trotter

    def _apply_trotter(self, psi, beta):
        steps = self.config.steps
        dt = beta / steps
        out = psi.copy()
        terms = self._trotter_terms()
        for _ in range(steps):
            for targets, phases, c in terms:
                # exp(-i theta P) = cos(theta) - i sin(theta) P  since P^2 = 1
                theta = dt * c
                moved = np.empty_like(out)
                moved[targets] = phases * out
                out = math.cos(theta) * out - 1j * math.sin(theta) * moved
        return out

    def apply(self, psi: np.ndarray, beta: float) -> np.ndarray:
        _check_dim(psi, self.h_m.n_qubits)
        if beta == 0.0:
            return psi.copy()
        cfg = self.config
        if cfg.mode == "trotter":
            out = self._apply_trotter(psi, beta)
        elif cfg.subspace_projection and self._feasible_support(psi) is not None:
            out = self._apply_subspace(psi, beta, self._feasible_support(psi))
        elif self.dim <= cfg.dense_limit:
            out = self._apply_eigh(psi, beta)
        else:
            out = self._apply_taylor(psi, beta)
        norm = np.linalg.norm(out)
        return out / norm if norm > 0 else out

    def _feasible_support(self, psi) -> np.ndarray | None:
        mode = self.h_m.kind.feasibility_mode
        if mode is None:
            return None
        mask = feasible_mask(self.h_m.encoding, mode)
        if np.any(np.abs(psi[~mask]) > 0):
            return None
        return mask


def evolve_mixer(
    psi: np.ndarray,
    h_m: MixerHamiltonian,
    beta: float,
    config: EvolutionConfig | None = None,
    propagator: MixerPropagator | None = None,
) -> np.ndarray:
    prop = propagator or MixerPropagator(h_m, config)
    return prop.apply(psi, beta)


# ---------------------------------------------------------------------------
# readout


def expectation(psi: np.ndarray, h_c: CostHamiltonian) -> float:
    _check_dim(psi, h_c.n_qubits)
    return float(np.dot(np.abs(psi) ** 2, h_c.diagonal()))


def sample_indices(psi: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.abs(psi) ** 2
    probs = probs / probs.sum()
    return rng.choice(len(probs), size=shots, p=probs)


def sampled_expectation(
    psi: np.ndarray, h_c: CostHamiltonian, shots: int, seed: "int | np.random.Generator"
) -> float:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    idx = sample_indices(psi, shots, rng)
    return float(h_c.diagonal()[idx].mean())


def ground_indices(e: Encoding, ground_states: Iterable[Conformation]) -> np.ndarray:
    """Basis indices of the ground folds that this encoding can represent."""
    out = []
    for conf in ground_states:
        try:
            out.append(int(encode(e, conf), 2) if e.n_qubits else 0)
        except ValueError:
            continue
    return np.array(sorted(set(out)), dtype=np.int64)


def ground_state_probability(
    psi: np.ndarray, e: Encoding, ground_states: Iterable[Conformation]
) -> float:
    _check_dim(psi, e.n_qubits)
    idx = ground_indices(e, ground_states)
    return float(np.sum(np.abs(psi[idx]) ** 2)) if len(idx) else 0.0


# ---------------------------------------------------------------------------
# full circuit


def initial_state(e: Encoding, init: str, mode: str = XY) -> np.ndarray:
    if init == UNIFORM_ALL:
        return prepare_uniform(e.n_qubits)
    if init == FEASIBLE:
        return prepare_feasible(e, mode)
    raise ValueError(f"unknown initial state {init!r}; use 'all' or 'feasible'")


def oracle_ground_states(h_c: CostHamiltonian) -> tuple[Conformation, ...]:
    e = h_c.encoding
    return enumerate_folds(h_c.instance, turn1=e.fixed_turn1).ground_states


@dataclass
class QaoaResult:
    state: np.ndarray = field(repr=False)
    expectation: float
    ground_state_probability: float


class QaoaCircuit:
    """Reusable ``U_M(beta_p) U_C(gamma_p) ... U_M(beta_1) U_C(gamma_1) |init>``."""

    def __init__(
        self,
        e: Encoding,
        h_c: CostHamiltonian,
        h_m: MixerHamiltonian,
        init: str = FEASIBLE,
        config: EvolutionConfig | None = None,
        ground_states: Iterable[Conformation] | None = None,
    ):
        if not (e.n_qubits == h_c.n_qubits == h_m.n_qubits):
            raise ValueError("encoding, cost and mixer disagree on the qubit count")
        _guard(e.n_qubits)
        self.encoding = e
        self.cost = h_c
        self.mixer = h_m
        self.init = init
        mode = h_m.kind.feasibility_mode or XY
        self.psi0 = initial_state(e, init, mode)
        self.propagator = MixerPropagator(h_m, config)
        self._phases = h_c.diagonal()
        if ground_states is None:
            ground_states = oracle_ground_states(h_c)
        self.ground_index = ground_indices(e, ground_states)

    def state(self, schedule: QaoaSchedule) -> np.ndarray:
        psi = self.psi0
        for gamma, beta in zip(schedule.gammas, schedule.betas):
            psi = psi * np.exp(-1j * gamma * self._phases)
            psi = self.propagator.apply(psi, beta)
        return psi

    def expectation(self, schedule: QaoaSchedule) -> float:
        psi = self.state(schedule)
        return float(np.dot(np.abs(psi) ** 2, self._phases))

    def ground_probability(self, psi: np.ndarray) -> float:
        return float(np.sum(np.abs(psi[self.ground_index]) ** 2))

    def run(self, schedule: QaoaSchedule) -> QaoaResult:
        psi = self.state(schedule)
        return QaoaResult(
            psi, float(np.dot(np.abs(psi) ** 2, self._phases)), self.ground_probability(psi)
        )


def run_qaoa(
    e: Encoding,
    h_c: CostHamiltonian,
    h_m: MixerHamiltonian,
    schedule: QaoaSchedule,
    init: str = FEASIBLE,
    config: EvolutionConfig | None = None,
    ground_states: Iterable[Conformation] | None = None,
) -> QaoaResult:
    return QaoaCircuit(e, h_c, h_m, init, config, ground_states).run(schedule)


# ---------------------------------------------------------------------------
# debug dump


def dump_statevector(psi: np.ndarray, path) -> None:
    """8-byte little-endian qubit count, then interleaved (re, im) float64 pairs."""
    n = int(round(math.log2(len(psi))))
    with open(path, "wb") as fh:
        fh.write(np.array([n], dtype="<i8").tobytes())
        fh.write(np.asarray(psi, dtype="<c16").tobytes())


def load_statevector(path) -> np.ndarray:
    with open(path, "rb") as fh:
        n = int(np.frombuffer(fh.read(8), dtype="<i8")[0])
        data = np.frombuffer(fh.read(), dtype="<c16")
    if len(data) != 1 << n:
        raise ValueError(f"expected {1 << n} amplitudes, found {len(data)}")
    return data.copy()
