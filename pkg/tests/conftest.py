import itertools

import numpy as np
import pytest

from latticefold import InteractionModel, LatticeKind, ProteinInstance, build_cost, build_encoding


def hp_instance(seq, lattice="planar"):
    return ProteinInstance(seq, InteractionModel.hp(), LatticeKind.parse(lattice))


def random_hp_sequences(count, n, seed):
    rng = np.random.default_rng(seed)
    return ["".join(rng.choice(list("HP"), n)) for _ in range(count)]


def brute_force_folds(lattice, n):
    """Every canonical self-avoiding turn sequence, by filtering the full product."""
    lat = LatticeKind.parse(lattice)
    units = lat.unit_vectors
    out = []
    for seq in itertools.product(range(lat.n_dirs), repeat=n - 1):
        if seq[0] != 0 or seq[1] not in (0, 1):
            continue
        if lat is LatticeKind.CUBIC and n > 3 and seq[2] == 5:
            continue
        pts = np.vstack([np.zeros(lat.dims, int), np.cumsum(units[list(seq)], axis=0)])
        if len({tuple(p) for p in pts}) == n:
            out.append(seq)
    return out


@pytest.fixture
def hpph():
    return hp_instance("HPPH")


@pytest.fixture
def enc4():
    return build_encoding("planar", 4)


@pytest.fixture
def hpph_cost(hpph, enc4):
    return build_cost(enc4, hpph)


# acceptance criteria register a one-line verdict here; printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
