"""Lattice protein folding with QAOA on a one-hot turn encoding."""
from .compiler import GateCostReport, HardwareGraph, logical_cost, routing_overhead, term_cnot_cost
from .encoding import XY, XZ, Encoding, build_encoding, decode, encode, feasible_states, is_feasible
from .estimator import QAOAFolder
from .hamiltonian import CostHamiltonian, adjacency, build_cost, h_olap_pair, sum_string_digit, to_pauli
from .lattice import (
    Conformation,
    InteractionModel,
    LatticeKind,
    ProteinInstance,
    classical_energy,
    coordinates,
    enumerate_folds,
)
from .mixers import ALL_MIXERS, MixerHamiltonian, MixerKind, build_mixer
from .optimizer import (
    ExperimentConfig,
    ExperimentStats,
    NelderMeadConfig,
    divide_and_conquer,
    nelder_mead,
    run_experiment,
)
from .pauli import PauliSum
from .polynomial import BooleanPolynomial
from .simulator import (
    EvolutionConfig,
    QaoaSchedule,
    evolve_cost,
    evolve_mixer,
    expectation,
    ground_state_probability,
    prepare_feasible,
    prepare_uniform,
    run_qaoa,
    sampled_expectation,
)

__version__ = "0.1.0"
