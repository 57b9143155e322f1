import json

import pytest

from hopforce.errors import BoundViolation, ForcingError, GraphError, LimitExceeded
from hopforce.forcing import Rule
from hopforce.graph import make_family, to_mask
from hopforce.reference import naive_forcing_number, naive_pt, naive_pt_of_size, naive_throttling
from hopforce.solvers import (INF, ProductCertificate, SearchLimits, certificate_from_dict, certificate_to_dict,
                              format_value, forcing_number, is_forcing_set, k_of_pt, min_propagation_time,
                              product_throttling, pt_of_size, throttling_number, validate_certificate)


@pytest.mark.parametrize("family, params, rule, expected", [
    ("petersen", (), Rule.H, 6),
    ("petersen", (), Rule.Z, 5),
    ("complete_bipartite", (2, 3), Rule.H, 3),
    ("complete_bipartite", (2, 3), Rule.Z, 3),
    ("wheel", (6,), Rule.H, 4),
    ("star", (9,), Rule.H, 2),
    ("cycle", (7,), Rule.H, 3),
    ("path", (8,), Rule.H, 2),
    ("star", (5,), Rule.FLOORZ, 2),
    ("complete", (5,), Rule.H, 5),
    ("empty", (6,), Rule.H, 1),
])
def test_forcing_number(family, params, rule, expected):
    g = make_family(family, *params)
    size, base = forcing_number(g, rule)
    assert size == expected
    assert is_forcing_set(g, base, rule)[0]


def test_forcing_number_witness_is_least():
    size, base = forcing_number(make_family("path", 5), Rule.H)
    assert (size, base) == (2, to_mask([0, 1]))


def test_is_forcing_set_returns_chronological_list():
    g = make_family("path", 4)
    ok, forces = is_forcing_set(g, to_mask([0, 1]), Rule.H)
    assert ok
    assert len(forces) == 2
    assert is_forcing_set(g, to_mask([1]), Rule.H) == (False, None)
    assert is_forcing_set(g, g.full, Rule.H) == (True, [])


def test_forcing_sandwich(corpus):
    for g in corpus:
        h = forcing_number(g, Rule.H)[0]
        assert forcing_number(g, Rule.FLOORZ)[0] <= h <= forcing_number(g, Rule.Z)[0] + 1


def test_propagation_time():
    g = make_family("complete_bipartite", 3, 5)
    pt, schedule = min_propagation_time(g, to_mask([0, 1, 2, 3, 4]), Rule.H)
    assert pt == 2
    assert schedule.blue_after(pt) == g.full
    assert min_propagation_time(g, g.full, Rule.H)[0] == 0
    assert min_propagation_time(make_family("path", 3), to_mask([1]), Rule.H) == (INF, None)
    with pytest.raises(GraphError):
        min_propagation_time(make_family("path", 3), 1 << 5, Rule.H)


def test_pt_of_size_edge_cases():
    empty4 = make_family("empty", 4)
    assert pt_of_size(empty4, 2, Rule.H) == 2
    assert pt_of_size(empty4, 4, Rule.H) == 0
    assert pt_of_size(empty4, 0, Rule.H) == INF
    assert pt_of_size(make_family("complete", 4), 2, Rule.H) == INF
    with pytest.raises(GraphError):
        pt_of_size(empty4, 5, Rule.H)


@pytest.mark.parametrize("family, params, rule, expected", [
    ("path", (10,), Rule.H, 6),
    ("petersen", (), Rule.H, 8),
    ("petersen", (), Rule.Z, 6),
    ("empty", (9,), Rule.H, 5),
    ("cycle", (11,), Rule.H, 7),
    ("cross", (), Rule.H, 5),
    ("complete_bipartite", (3, 5), Rule.H, 7),
    ("complete_bipartite", (3, 5), Rule.Z, 7),
    ("complete", (4,), Rule.H, 4),
    ("path", (1,), Rule.H, 1),
])
def test_throttling_number(family, params, rule, expected):
    g = make_family(family, *params)
    cert = throttling_number(g, rule)
    assert cert.th == expected
    assert cert.size + cert.pt == expected
    assert validate_certificate(g, cert)


def test_certificate_json_round_trip():
    g = make_family("cycle", 8)
    cert = throttling_number(g, Rule.H)
    data = json.loads(json.dumps(certificate_to_dict(cert)))
    assert data["value"] == cert.th and data["quantity"] == "throttle"
    again = certificate_from_dict(g, data)
    assert again.th == cert.th and again.base == cert.base
    data["value"] = cert.th - 1
    with pytest.raises(ForcingError):
        certificate_from_dict(g, data)


def test_state_limit_carries_incumbent():
    g = make_family("path", 12)
    with pytest.raises(LimitExceeded) as info:
        throttling_number(g, Rule.H, SearchLimits(states=5))
    assert info.value.partial.th >= 6


def test_product_throttling():
    assert product_throttling(make_family("cycle", 5), "x").value == 5
    star = product_throttling(make_family("path", 7), "star")
    assert star.value == 4
    assert star.value == star.k * star.pt_k
    assert product_throttling(make_family("complete", 4), "star").value == INF
    with pytest.raises(GraphError):
        product_throttling(make_family("path", 3), "plus")


def test_product_certificate_checks_value():
    assert ProductCertificate(k=3, pt_k=1, variant="star").value == 3
    assert ProductCertificate(k=3, pt_k=1, variant="x").value == 6
    with pytest.raises(BoundViolation):
        ProductCertificate(k=3, pt_k=1, variant="star", value=4)


def test_k_of_pt():
    assert k_of_pt(make_family("path", 5), 1) == 3
    assert k_of_pt(make_family("empty", 4), 1) == 2
    assert k_of_pt(make_family("path", 5), 0) == 5
    assert k_of_pt(make_family("complete", 3), 1) is None


def test_format_value():
    assert format_value(INF) == "inf"
    assert format_value(7) == "7"


@pytest.mark.parametrize("rule", list(Rule))
def test_solvers_match_brute_force(small_graphs, rule):
    for g in small_graphs:
        assert forcing_number(g, rule)[0] == naive_forcing_number(g, rule)
        assert throttling_number(g, rule).th == naive_throttling(g, rule)
        for size in range(1, g.n + 1):
            assert pt_of_size(g, size, rule) == naive_pt_of_size(g, size, rule)


@pytest.mark.slow
@pytest.mark.parametrize("rule", list(Rule))
def test_propagation_time_matches_brute_force_for_every_base(small_graphs, rule):
    for g in small_graphs:
        for base in range(1, g.full + 1):
            assert min_propagation_time(g, base, rule)[0] == naive_pt(g, base, rule)
