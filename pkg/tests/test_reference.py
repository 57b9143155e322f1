import random

from hopforce.forcing import ForcingState, Rule, round_decompose
from hopforce.graph import make_family, to_mask
from hopforce.reference import (naive_forcing_number, naive_pt, naive_pt_of_size, naive_throttling, random_force_set,
                                random_forcing_instances, round_options)
from hopforce.solvers import INF


def test_round_options_on_empty_graph():
    g = make_family("empty", 3)
    options = set(round_options(g, ForcingState.start(0b001), Rule.H))
    assert options == {ForcingState(0b011, 0b001), ForcingState(0b101, 0b001)}


def test_naive_values():
    assert naive_pt(make_family("path", 4), to_mask([0, 1]), Rule.H) == 2
    assert naive_pt(make_family("path", 3), to_mask([1]), Rule.H) == INF
    assert naive_forcing_number(make_family("complete", 4), Rule.Z) == 3
    assert naive_throttling(make_family("empty", 4), Rule.H) == 3
    assert naive_pt_of_size(make_family("empty", 4), 2, Rule.H) == 2


def test_random_force_sets_color_everything():
    for g, fs in random_forcing_instances(30, max_n=6, seed=1):
        assert fs.colored == g.full
        round_decompose(g, fs, Rule.H)


def test_random_force_set_gives_up_on_complete_graph():
    assert random_force_set(make_family("complete", 3), random.Random(0), attempts=5) is None
