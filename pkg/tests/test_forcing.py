import json

import pytest

from hopforce.errors import ForcingError, GraphError
from hopforce.forcing import (Force, ForceSet, ForcingState, Rule, Status, apply_force, augment,
                              execute_chronological, force_kind, reverse, round_decompose, schedule_from_dict,
                              schedule_to_dict, terminus, valid_forces, vertex_status, z_closure)
from hopforce.graph import make_family, to_mask
from hopforce.reference import random_forcing_instances


def test_rule_parse():
    assert Rule.parse("h") is Rule.H
    assert Rule.parse("FLOORZ") is Rule.FLOORZ
    assert Rule.parse(Rule.Z) is Rule.Z
    with pytest.raises(GraphError):
        Rule.parse("X")


def test_force_set_validation():
    with pytest.raises(ForcingError):
        ForceSet(0b1, (Force(0, 1), Force(0, 2)))
    with pytest.raises(ForcingError):
        ForceSet(0b11, (Force(0, 2), Force(1, 2)))
    with pytest.raises(ForcingError):
        ForceSet(0b11, (Force(0, 1),))
    with pytest.raises(ForcingError):
        Force(3, 3)
    with pytest.raises(ForcingError):
        ForcingState(blue=0b01, extinct=0b10)


def test_hop_needs_all_neighbors_blue():
    g = make_family("path", 4)
    state = ForcingState.start(to_mask([0, 1]))
    assert force_kind(g, state, Force(0, 2), Rule.H) == "hop"
    assert force_kind(g, state, Force(0, 3), Rule.H) == "hop"
    assert force_kind(g, state, Force(1, 3), Rule.H) is None
    assert force_kind(g, state, Force(1, 2), Rule.Z) == "z"
    assert force_kind(g, state, Force(1, 2), Rule.H) is None
    assert force_kind(g, state, Force(1, 2), Rule.FLOORZ) == "z"
    with pytest.raises(ForcingError):
        apply_force(g, state, Force(1, 3), Rule.H)


def test_extinct_vertex_cannot_hop_again():
    g = make_family("empty", 3)
    state = apply_force(g, ForcingState.start(0b001), Force(0, 1), Rule.H)
    assert state == ForcingState(blue=0b011, extinct=0b001)
    assert vertex_status(g, state, 0, Rule.H) is Status.EXTINCT
    assert vertex_status(g, state, 1, Rule.H) is Status.ACTIVE
    assert vertex_status(g, state, 2, Rule.H) is Status.WHITE
    assert valid_forces(g, state, Rule.H) == {Force(1, 2)}


def test_vertex_status_dormant():
    g = make_family("path", 3)
    state = ForcingState.start(0b001)
    assert vertex_status(g, state, 0, Rule.H) is Status.DORMANT
    assert vertex_status(g, state, 0, Rule.Z) is Status.ACTIVE


def test_round_decompose_path():
    g = make_family("path", 4)
    fs = ForceSet(to_mask([0, 1]), (Force(0, 2), Force(1, 3)))
    schedule = round_decompose(g, fs, Rule.H)
    assert schedule.rounds == (0b0011, 0b0100, 0b1000)
    assert schedule.pt == 2
    assert schedule.blue_after(1) == 0b0111
    assert schedule.force_set() == fs


def test_round_decompose_trivial():
    g = make_family("cycle", 5)
    schedule = round_decompose(g, ForceSet(g.full), Rule.H)
    assert schedule.pt == 0
    assert schedule.rounds == (g.full,)


def test_round_decompose_rejects_stuck_forces():
    g = make_family("path", 3)
    with pytest.raises(ForcingError):
        round_decompose(g, ForceSet(0b001, (Force(0, 2),)), Rule.H)


def test_execute_chronological_reports_index():
    g = make_family("path", 4)
    forces = [Force(0, 2), Force(0, 3)]
    with pytest.raises(ForcingError) as info:
        execute_chronological(g, 0b0011, forces, Rule.H)
    assert info.value.index == 1


def test_z_closure():
    g = make_family("path", 6)
    assert z_closure(g, 0b000001) == g.full
    assert z_closure(g, 0b000100) == 0b000100
    cycle = make_family("cycle", 6)
    assert z_closure(cycle, 0b000011) == cycle.full


def test_terminus_and_reverse():
    g = make_family("path", 4)
    fs = ForceSet(to_mask([0, 1]), (Force(0, 2), Force(1, 3)))
    assert terminus(g, fs) == to_mask([2, 3])
    back = reverse(g, fs)
    assert back.base == to_mask([2, 3])
    assert set(back.forces) == {Force(2, 0), Force(3, 1)}
    with pytest.raises(ForcingError):
        terminus(g, ForceSet(0b0011, (Force(0, 2),)))


def test_reversed_force_set_runs_rounds_backwards():
    for g, fs in random_forcing_instances(60, max_n=7, seed=11):
        forward = round_decompose(g, fs, Rule.H)
        backward = round_decompose(g, reverse(g, fs), Rule.H)
        assert backward.blue_after(backward.pt) == g.full
        t = forward.pt
        for i in range(t + 1):
            assert forward.rounds[t - i] & ~backward.blue_after(i) == 0


def test_augmented_graph_z_forces_in_the_same_rounds():
    for g, fs in random_forcing_instances(60, max_n=7, seed=12):
        forward = round_decompose(g, fs, Rule.H)
        h = augment(g, fs)
        assert h.edge_count() == g.edge_count() + len(fs.forces)
        assert round_decompose(h, fs, Rule.Z).rounds == forward.rounds


def test_schedule_json():
    g = make_family("path", 4)
    schedule = round_decompose(g, ForceSet(0b0011, (Force(0, 2), Force(1, 3))), Rule.H)
    data = json.loads(json.dumps(schedule_to_dict(schedule, Rule.H)))
    assert data == {"base": [0, 1], "forces": [{"src": 0, "dst": 2, "round": 1}, {"src": 1, "dst": 3, "round": 2}],
                    "rule": "H", "pt": 2}
    again, rule = schedule_from_dict(g, data)
    assert rule is Rule.H
    assert again.rounds == schedule.rounds
    data["forces"][1]["dst"] = 0
    with pytest.raises(ForcingError):
        schedule_from_dict(g, data)
