"""Nelder-Mead and the multi-run experiment harness."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .encoding import XY, build_encoding, feasible_states, index_to_bits
from .hamiltonian import CostHamiltonian, build_cost
from .lattice import RIGHT, UP, ProteinInstance, enumerate_folds
from .mixers import MixerKind, build_mixer
from .simulator import (
    FEASIBLE,
    UNIFORM_ALL,
    EvolutionConfig,
    QaoaCircuit,
    QaoaSchedule,
    sample_indices,
)

CONSTANT = "constant"
REDUCED = "reduced"


# ---------------------------------------------------------------------------
# Nelder-Mead


@dataclass(frozen=True)
class NelderMeadConfig:
    f_tolerance: float = 1e-3
    max_evals: int = 2000
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_step: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if not self.f_tolerance > 0:
            raise ValueError("f_tolerance must be positive")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")
        if self.initial_step == 0:
            raise ValueError("initial_step must be nonzero")


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    nfev: int
    converged: bool


def nelder_mead(
    f: Callable[[np.ndarray], float], x0: Sequence[float], cfg: NelderMeadConfig | None = None
) -> NelderMeadResult:
    """Minimise ``f`` with a fixed-coefficient downhill simplex.

    Stops once the spread of simplex values drops below ``f_tolerance`` or the
    evaluation budget is spent. The start simplex is ``x0`` plus one axis step
    per dimension, so the result depends only on ``x0`` and the config.
    """
    cfg = cfg or NelderMeadConfig()
    x0 = np.asarray(x0, dtype=float).ravel()
    dim = len(x0)
    if dim < 1:
        raise ValueError("need at least one parameter")
    nfev = 0

    def call(x):
        nonlocal nfev
        nfev += 1
        v = float(f(x))
        if not math.isfinite(v):
            raise ValueError(f"objective returned non-finite value {v} at {x.tolist()}")
        return v

    simplex = np.vstack([x0] + [x0 + cfg.initial_step * np.eye(dim)[i] for i in range(dim)])
    values = np.array([call(x) for x in simplex])
    a, g, c, s = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink

    while True:
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        if values[-1] - values[0] < cfg.f_tolerance:
            return NelderMeadResult(simplex[0].copy(), float(values[0]), nfev, True)
        if nfev >= cfg.max_evals:
            return NelderMeadResult(simplex[0].copy(), float(values[0]), nfev, False)

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + a * (centroid - worst)
        fr = call(xr)
        if fr < values[0]:
            xe = centroid + g * (xr - centroid)
            fe = call(xe)
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = centroid + c * (xr - centroid)  # outside
            fc = call(xc)
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + c * (worst - centroid)  # inside
            fc = call(xc)
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        best = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = best + s * (simplex[i] - best)
            values[i] = call(simplex[i])


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ExperimentConfig:
    instance: ProteinInstance
    mixer: MixerKind
    p: int = 1
    init: str = FEASIBLE
    cost_variant: str = CONSTANT
    runs: int = 100
    shots: int | None = None
    objective_shots: int | None = None
    seed: int = 0
    tol: float = 1e-3
    max_evals: int = 2000
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    lambda_olap: float | None = None
    turn1: int | None = None

    def __post_init__(self):
        self.mixer = MixerKind.parse(self.mixer)
        if self.p < 0:
            raise ValueError("p must be >= 0")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.init not in (UNIFORM_ALL, FEASIBLE):
            raise ValueError(f"init must be 'all' or 'feasible', got {self.init!r}")
        if self.cost_variant not in (CONSTANT, REDUCED):
            raise ValueError(f"cost must be 'constant' or 'reduced', got {self.cost_variant!r}")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.objective_shots is not None and self.objective_shots < 1:
            raise ValueError("objective_shots must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def to_json(self) -> dict:
        ev = self.evolution
        return {
            "sequence": self.instance.sequence,
            "lattice": self.instance.lattice.value,
            "model": self.instance.model.to_json(),
            "mixer": self.mixer.value,
            "p": self.p,
            "init": self.init,
            "cost": self.cost_variant,
            "runs": self.runs,
            "shots": self.shots,
            "objective_shots": self.objective_shots,
            "seed": self.seed,
            "tol": self.tol,
            "max_evals": self.max_evals,
            "evolution": ev.mode if ev.mode == "exact" else f"trotter:{ev.steps}",
            "lambda_olap": self.lambda_olap,
            "turn1": self.turn1,
        }


@dataclass
class RunResult:
    run: int
    gammas: list[float]
    betas: list[float]
    expectation: float
    ground_state_probability: float
    evaluations: int
    converged: bool
    counts: dict[str, int] | None = None


@dataclass
class ExperimentStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "ExperimentStats":
        v = np.asarray(values, dtype=float)
        if v.size == 0:
            raise ValueError("no values to summarise")
        q = np.percentile(v, [0, 25, 50, 75, 100], method="linear")
        return cls(*(float(x) for x in q), float(v.mean()))


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list[RunResult]
    stats: ExperimentStats
    n_qubits: int
    ground_energy: float

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "n_qubits": self.n_qubits,
            "ground_energy": self.ground_energy,
            "per_run": [asdict(r) for r in self.runs],
            "stats": asdict(self.stats),
        }


def cost_for(cfg: ExperimentConfig, e) -> CostHamiltonian:
    """Constant cost keeps every penalty; reduced drops what the mixer guards."""
    skip_short = skip_long = False
    if cfg.cost_variant == REDUCED:
        skip_short = cfg.mixer.guards_short_range
        skip_long = cfg.mixer.guards_long_range
    return build_cost(
        e, cfg.instance, cfg.lambda_olap, skip_short=skip_short, skip_long=skip_long
    )


def run_rng(seed: int, run: int) -> np.random.Generator:
    return np.random.default_rng([seed, run])


def initial_parameters(rng: np.random.Generator, p: int) -> np.ndarray:
    gammas = rng.uniform(0.0, 2 * math.pi, size=p)
    betas = rng.uniform(0.0, math.pi, size=p)
    return np.concatenate([gammas, betas])


def _counts(psi, shots, rng, n_qubits) -> dict[str, int]:
    idx, n = np.unique(sample_indices(psi, shots, rng), return_counts=True)
    return {index_to_bits(int(i), n_qubits): int(c) for i, c in zip(idx, n)}


def optimise_run(circuit: QaoaCircuit, cfg: ExperimentConfig, run: int) -> RunResult:
    rng = run_rng(cfg.seed, run)
    x0 = initial_parameters(rng, cfg.p)
    if cfg.p == 0:
        psi = circuit.state(QaoaSchedule((), ()))
        counts = _counts(psi, cfg.shots, rng, circuit.encoding.n_qubits) if cfg.shots else None
        return RunResult(
            run, [], [], circuit.expectation(QaoaSchedule((), ())),
            circuit.ground_probability(psi), 0, True, counts,
        )

    diag = circuit._phases
    if cfg.objective_shots:
        # sampled objective with its own stream so the optimiser sees shot noise
        sample_rng = np.random.default_rng([cfg.seed, run, 1])

        def objective(x):
            psi = circuit.state(QaoaSchedule.from_vector(x))
            return float(diag[sample_indices(psi, cfg.objective_shots, sample_rng)].mean())
    else:

        def objective(x):
            return circuit.expectation(QaoaSchedule.from_vector(x))

    nm = NelderMeadConfig(f_tolerance=cfg.tol, max_evals=cfg.max_evals, seed=cfg.seed)
    res = nelder_mead(objective, x0, nm)
    schedule = QaoaSchedule.from_vector(res.x)
    out = circuit.run(schedule)
    counts = _counts(out.state, cfg.shots, rng, circuit.encoding.n_qubits) if cfg.shots else None
    return RunResult(
        run,
        list(schedule.gammas),
        list(schedule.betas),
        out.expectation,
        out.ground_state_probability,
        res.nfev,
        res.converged,
        counts,
    )


def build_circuit(cfg: ExperimentConfig) -> QaoaCircuit:
    inst = cfg.instance
    e = build_encoding(inst.lattice, inst.n_residues, turn1=cfg.turn1)
    h_c = cost_for(cfg, e)
    h_m = build_mixer(e, cfg.mixer)
    ground = enumerate_folds(inst, turn1=cfg.turn1).ground_states
    return QaoaCircuit(e, h_c, h_m, cfg.init, cfg.evolution, ground)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    circuit = build_circuit(cfg)
    results = [optimise_run(circuit, cfg, r) for r in range(cfg.runs)]
    stats = ExperimentStats.from_values([r.ground_state_probability for r in results])
    ground = enumerate_folds(cfg.instance, turn1=cfg.turn1).ground_energy
    return ExperimentResult(cfg, results, stats, circuit.encoding.n_qubits, ground)


# ---------------------------------------------------------------------------
# divide and conquer


@dataclass
class SubInstanceReport:
    turn1: str
    n_qubits: int
    ground_energy: float
    ground_bitstrings: list[str]
    experiment: ExperimentResult

    def to_json(self) -> dict:
        return {
            "turn1": self.turn1,
            "n_qubits": self.n_qubits,
            "ground_energy": self.ground_energy,
            "ground_bitstrings": self.ground_bitstrings,
            "experiment": self.experiment.to_json(),
        }


@dataclass
class SplitReport:
    full_ground_energy: float
    parts: list[SubInstanceReport]

    @property
    def best(self) -> SubInstanceReport:
        return min(self.parts, key=lambda r: r.ground_energy)

    def to_json(self) -> dict:
        return {
            "full_ground_energy": self.full_ground_energy,
            "combined_ground_energy": self.best.ground_energy,
            "winning_turn1": self.best.turn1,
            "parts": [p.to_json() for p in self.parts],
        }


def sub_instance_ground(instance: ProteinInstance, turn1: int) -> tuple[float, list[str]]:
    """Lowest cost over the feasible strings of the sub-encoding, and its minimisers."""
    e = build_encoding(instance.lattice, instance.n_residues, turn1=turn1)
    h_c = build_cost(e, instance)
    diag = h_c.diagonal()
    states = feasible_states(e, XY)
    values = np.array([diag[int(s, 2) if s else 0] for s in states])
    best = float(values.min())
    return best, [s for s, v in zip(states, values) if abs(v - best) < 1e-9]


def divide_and_conquer(cfg: ExperimentConfig) -> SplitReport:
    """Solve the turn-1 = RIGHT and turn-1 = UP halves separately.

    Each half runs the experiment described by ``cfg`` on a smaller encoding
    where turn 1 is a constant.
    """
    inst = cfg.instance
    if inst.n_residues < 4:
        raise ValueError("instance is too short to split")
    parts = []
    for turn1 in (RIGHT, UP):
        sub_cfg = ExperimentConfig(**{**cfg.__dict__, "turn1": turn1})
        energy, bitstrings = sub_instance_ground(inst, turn1)
        result = run_experiment(sub_cfg)
        parts.append(
            SubInstanceReport(
                inst.lattice.direction_names[turn1],
                result.n_qubits,
                energy,
                bitstrings,
                result,
            )
        )
    full = enumerate_folds(inst).ground_energy
    return SplitReport(full, parts)


# ---------------------------------------------------------------------------
# output


def dumps_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


RUN_CSV_FIELDS = (
    "mixer", "p", "run", "expectation", "ground_state_probability",
    "evaluations", "converged", "gammas", "betas",
)


def runs_to_csv(results: Sequence[ExperimentResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_CSV_FIELDS)
    for res in results:
        for r in res.runs:
            w.writerow([
                res.config.mixer.value, res.config.p, r.run, repr(r.expectation),
                repr(r.ground_state_probability), r.evaluations, int(r.converged),
                " ".join(repr(g) for g in r.gammas), " ".join(repr(b) for b in r.betas),
            ])
    return buf.getvalue()
