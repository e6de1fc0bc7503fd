"""scikit-learn style wrapper: ``fit`` a sequence, ``predict`` its fold."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .encoding import decode, index_to_bits
from .lattice import InteractionModel, LatticeKind, ProteinInstance
from .mixers import MixerKind
from .optimizer import CONSTANT, REDUCED, ExperimentConfig, build_circuit, optimise_run
from .simulator import FEASIBLE, UNIFORM_ALL, EvolutionConfig, QaoaSchedule


def _validate_sequence(X) -> str:
    """Accept a sequence string or a one-element container holding one."""
    if isinstance(X, str):
        seq = X
    else:
        items = list(np.ravel(np.asarray(X, dtype=object)))
        if len(items) != 1 or not isinstance(items[0], str):
            raise ValueError("expected a single residue sequence")
        seq = items[0]
    seq = "".join(seq.split())
    if not seq:
        raise ValueError("empty sequence")
    return seq


class QAOAFolder(BaseEstimator):
    """Fold a lattice protein with QAOA, keeping the best of ``runs`` restarts.

    Parameters
    ----------
    lattice : {"planar", "cubic"}
    mixer : str
        One of the seven mixer names (``"x"``, ``"xy-simple"``, ...).
    p : int
        Circuit depth.
    init : {"feasible", "all"}
    cost : {"constant", "reduced"}
    runs : int
        Random restarts; the one with the lowest expectation is kept.
    tol : float
        Nelder-Mead stopping tolerance on simplex values.
    seed : int
    evolution : str
        ``"exact"`` or ``"trotter:<steps>"``.
    model : InteractionModel or None
        Contact energies, HP when ``None``.
    """

    def __init__(
        self,
        lattice="planar",
        mixer="xy-simple",
        p=1,
        init=FEASIBLE,
        cost=CONSTANT,
        runs=10,
        tol=1e-3,
        seed=0,
        evolution="exact",
        model=None,
    ):
        self.lattice = lattice
        self.mixer = mixer
        self.p = p
        self.init = init
        self.cost = cost
        self.runs = runs
        self.tol = tol
        self.seed = seed
        self.evolution = evolution
        self.model = model

    def _check_params(self):
        LatticeKind.parse(self.lattice)
        MixerKind.parse(self.mixer)
        if self.init not in (FEASIBLE, UNIFORM_ALL):
            raise ValueError(f"init must be 'feasible' or 'all', got {self.init!r}")
        if self.cost not in (CONSTANT, REDUCED):
            raise ValueError(f"cost must be 'constant' or 'reduced', got {self.cost!r}")
        if int(self.p) != self.p or self.p < 0:
            raise ValueError("p must be a non-negative integer")
        if int(self.runs) != self.runs or self.runs < 1:
            raise ValueError("runs must be a positive integer")

    def fit(self, X, y=None):
        self._check_params()
        seq = _validate_sequence(X)
        model = self.model if self.model is not None else InteractionModel.hp()
        instance = ProteinInstance(seq, model, LatticeKind.parse(self.lattice))
        cfg = ExperimentConfig(
            instance,
            self.mixer,
            p=int(self.p),
            init=self.init,
            cost_variant=self.cost,
            runs=int(self.runs),
            seed=self.seed,
            tol=self.tol,
            evolution=EvolutionConfig.parse(self.evolution),
        )
        circuit = build_circuit(cfg)
        results = [optimise_run(circuit, cfg, r) for r in range(cfg.runs)]
        best = min(results, key=lambda r: (r.expectation, r.run))
        self.sequence_ = seq
        self.circuit_ = circuit
        self.runs_ = results
        self.schedule_ = QaoaSchedule(best.gammas, best.betas)
        self.expectation_ = best.expectation
        self.ground_state_probability_ = best.ground_state_probability
        self.state_ = circuit.state(self.schedule_)
        self.n_qubits_ = circuit.encoding.n_qubits
        return self

    def predict_proba(self, X=None) -> dict[str, float]:
        """Probability of each fold (turn letters) in the optimised state."""
        check_is_fitted(self, "state_")
        self._check_same(X)
        e = self.circuit_.encoding
        probs = np.abs(self.state_) ** 2
        out: dict[str, float] = {}
        for idx in np.flatnonzero(probs > 1e-15):
            conf = decode(e, index_to_bits(int(idx), e.n_qubits))
            if conf is not None:
                key = str(conf)
                out[key] = out.get(key, 0.0) + float(probs[idx])
        return dict(sorted(out.items(), key=lambda kv: (-kv[1], kv[0])))

    def predict(self, X=None) -> str:
        """Most likely fold as a turn string, e.g. ``"RUL"``."""
        proba = self.predict_proba(X)
        if not proba:
            raise RuntimeError("optimised state has no weight on any one-hot bitstring")
        return next(iter(proba))

    def score(self, X=None, y=None) -> float:
        """Ground-state probability of the kept run."""
        check_is_fitted(self, "state_")
        self._check_same(X)
        return self.ground_state_probability_

    def _check_same(self, X):
        if X is not None and _validate_sequence(X) != self.sequence_:
            raise ValueError("estimator was fitted on a different sequence")
