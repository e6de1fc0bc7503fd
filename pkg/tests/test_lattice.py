import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticefold.lattice import (
    Conformation,
    InteractionModel,
    LatticeKind,
    ProteinInstance,
    classical_energy,
    contact_pairs,
    coordinates,
    enumerate_folds,
    is_self_avoiding,
    iter_self_avoiding_walks,
    overlap_pairs,
    squared_distance,
)

from conftest import brute_force_folds, hp_instance


def test_direction_tables():
    assert LatticeKind.PLANAR.direction_names == ("R", "U", "L", "D")
    assert LatticeKind.CUBIC.direction_names == ("R", "U", "F", "L", "D", "B")
    for lat in LatticeKind:
        for k in range(lat.n_dirs):
            assert lat.opposite(lat.opposite(k)) == k
            np.testing.assert_array_equal(
                lat.unit_vectors[k], -lat.unit_vectors[lat.opposite(k)]
            )


def test_coordinates_of_rul():
    conf = Conformation.from_string("planar", "RUL")
    np.testing.assert_array_equal(coordinates(conf), [[0, 0], [1, 0], [1, 1], [0, 1]])
    assert squared_distance(conf, 0, 3) == 1
    assert is_self_avoiding(conf)


def test_walk_that_doubles_back_is_not_self_avoiding():
    assert not is_self_avoiding(Conformation.from_string("planar", "RL"))
    assert not is_self_avoiding(Conformation.from_string("planar", "RULD"))


def test_first_turn_must_be_right():
    with pytest.raises(ValueError):
        Conformation.from_string("planar", "URL")


def test_pair_generators():
    assert list(contact_pairs(6)) == [(0, 3), (0, 5), (1, 4), (2, 5)]
    assert list(overlap_pairs(5)) == [(0, 2), (0, 4), (1, 3), (2, 4)]
    assert list(overlap_pairs(6, 4)) == [(0, 4), (1, 5)]


def test_hp_energy():
    inst = hp_instance("HPPH")
    assert classical_energy(inst, Conformation.from_string("planar", "RUL")) == -1
    assert classical_energy(inst, Conformation.from_string("planar", "RRR")) == 0
    with pytest.raises(ValueError):
        classical_energy(inst, Conformation.from_string("planar", "RLR"))


def test_hpph_enumeration():
    folds = enumerate_folds(hp_instance("HPPH"))
    assert len(folds) == 6
    assert folds.ground_energy == -1
    assert [str(c) for c in folds.ground_states] == ["RUL"]


def test_all_polar_has_flat_landscape():
    folds = enumerate_folds(hp_instance("PPPP"))
    assert len(folds) == 6
    assert {e for _, e in folds.folds} == {0.0}


@pytest.mark.parametrize(
    "lattice,n,count",
    # counts frozen from the brute-force product filter in conftest
    [("planar", 4, 6), ("planar", 5, 17), ("planar", 6, 48), ("planar", 7, 132),
     ("cubic", 4, 8), ("cubic", 5, 39)],
)
def test_fold_counts_match_brute_force(lattice, n, count):
    walks = list(iter_self_avoiding_walks(LatticeKind.parse(lattice), n))
    assert len(walks) == count
    assert sorted(c.turns for c in walks) == sorted(brute_force_folds(lattice, n))


def test_turn1_split_partitions_the_folds():
    inst = hp_instance("HPPHPH")
    full = enumerate_folds(inst)
    right = enumerate_folds(inst, turn1=0)
    up = enumerate_folds(inst, turn1=1)
    assert len(right) + len(up) == len(full)
    assert min(right.ground_energy, up.ground_energy) == full.ground_energy


def test_enumeration_cap():
    with pytest.raises(ValueError, match="cap"):
        enumerate_folds(hp_instance("H" * 12), cap=1000)


def test_interaction_model_json_roundtrip(tmp_path):
    m = InteractionModel.from_mapping({("A", "A"): -2.0, ("A", "B"): -0.5, ("B", "B"): 0.25})
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_json()))
    back = InteractionModel.from_json(path)
    assert back.energy("B", "A") == -0.5
    assert back.energy("B", "B") == 0.25


def test_model_must_be_symmetric(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"labels": ["A", "B"], "energies": [[0, 1], [2, 0]]}))
    with pytest.raises(ValueError):
        InteractionModel.from_json(path)


def test_instance_validation():
    with pytest.raises(ValueError):
        hp_instance("HPH")
    with pytest.raises(ValueError):
        hp_instance("HPXH")


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="HP", min_size=4, max_size=7), st.sampled_from(["planar", "cubic"]))
def test_ground_energy_bounds(seq, lattice):
    if lattice == "cubic" and len(seq) > 6:
        seq = seq[:6]
    inst = hp_instance(seq, lattice)
    folds = enumerate_folds(inst)
    # every fold is self-avoiding and no fold beats the sum of all favourable pairs
    floor = sum(p for _, _, p in inst.interaction_pairs())
    assert folds.ground_energy >= floor
    assert folds.ground_energy <= 0
    for conf in folds.ground_states:
        assert is_self_avoiding(conf)
        assert classical_energy(inst, conf) == folds.ground_energy
