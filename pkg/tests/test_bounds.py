import pytest

from hopforce.bounds import (BoundReport, build_alpha_witness, build_bipartite_witness, build_snaking_witness,
                             ceil_two_sqrt, family_formula, kst_strict_gap, lower_bound_kappa, product_lower_bound,
                             restricted_gap_search, spider_strict_gap, upper_bound_alpha, verify_bounds)
from hopforce.errors import BoundViolation, GraphError, UnsupportedRange
from hopforce.forcing import Rule
from hopforce.graph import make_family, write_graph6
from hopforce.solvers import INF, forcing_number, throttling_number, validate_certificate


@pytest.mark.parametrize("x, expected", [(0, 0), (1, 2), (2, 3), (4, 4), (7, 6), (9, 6), (14, 8), (36, 12)])
def test_ceil_two_sqrt(x, expected):
    assert ceil_two_sqrt(x) == expected


def test_bound_formulas():
    assert lower_bound_kappa(10, 3) == 8
    assert lower_bound_kappa(1, 0) == 1
    assert upper_bound_alpha(8, 5) == 7
    assert upper_bound_alpha(9, 9) == 5
    assert upper_bound_alpha(10, 4) == 9
    assert product_lower_bound(7, 1) == 4
    with pytest.raises(GraphError):
        lower_bound_kappa(5, 5)
    with pytest.raises(GraphError):
        upper_bound_alpha(5, 0)


@pytest.mark.parametrize("family, params, key, expected", [
    ("complete_bipartite", (3, 5), "th_H", 7),
    ("complete_bipartite", (5, 3), "th_Z", 7),
    ("path", (15,), "th_H", 8),
    ("ksp2", (9,), "th_H", 14),
    ("ksp2", (9,), "th_Z", 10),
    ("path", (7,), "th_star", 4),
    ("complete", (5,), "th_star", INF),
    ("petersen", (), "th_H", 8),
])
def test_family_formula(family, params, key, expected):
    assert family_formula(family, *params)[key] == expected


@pytest.mark.parametrize("family, params", [
    ("path", (2,)), ("path", (9,)), ("cycle", (5,)), ("cycle", (9,)), ("complete", (4,)), ("empty", (7,)),
    ("star", (6,)), ("complete_bipartite", (2, 4)), ("complete_bipartite", (0, 5)), ("petersen", ()),
    ("ksp2", (3,)), ("cross", ()), ("kst_augmented", (0, 4)),
])
def test_family_formula_agrees_with_search(family, params):
    g = make_family(family, *params)
    values = family_formula(family, *params)
    for key, rule in (("H", Rule.H), ("Z", Rule.Z)):
        if key in values:
            assert forcing_number(g, rule)[0] == values[key]
    for key, rule in (("th_H", Rule.H), ("th_Z", Rule.Z)):
        if key in values:
            assert throttling_number(g, rule).th == values[key]


def test_family_formula_unknown():
    with pytest.raises(GraphError):
        family_formula("spider", 1, 2, 3)


@pytest.mark.parametrize("family, n, base, pt, th", [
    ("path", 15, 4, 4, 8),
    ("cycle", 16, 5, 4, 9),
    ("path", 2, 2, 0, 2),
])
def test_snaking_witness(family, n, base, pt, th):
    cert = build_snaking_witness(family, n)
    assert (cert.size, cert.pt, cert.th) == (base, pt, th)


def test_snaking_witness_needs_known_family():
    with pytest.raises(GraphError):
        build_snaking_witness("wheel", 6)


@pytest.mark.parametrize("s, t, size, th", [(3, 5, 5, 7), (0, 9, 3, 5), (1, 1, 2, 2)])
def test_bipartite_witness(s, t, size, th):
    cert = build_bipartite_witness(s, t)
    assert (cert.size, cert.th) == (size, th)


def test_alpha_witness_meets_upper_bound(random_corpus):
    for g in random_corpus:
        cert = build_alpha_witness(g)
        assert validate_certificate(g, cert)
        assert cert.th >= throttling_number(g, Rule.H).th


def test_verify_bounds_petersen():
    report = verify_bounds(make_family("petersen"))
    assert (report.lower, report.exact, report.upper) == (8, 8, 9)
    assert report.tight_lower and not report.tight_upper
    assert not report.shortcut


def test_verify_bounds_shortcut():
    report = verify_bounds(make_family("complete_bipartite", 4, 7), compute=False)
    assert report.shortcut
    assert report.exact == report.lower == report.upper == 9
    assert throttling_number(make_family("complete_bipartite", 4, 7), Rule.H).th == 9


def test_verify_bounds_single_vertex_and_no_exact():
    report = verify_bounds(make_family("path", 1))
    assert (report.lower, report.exact, report.upper) == (1, 1, 1)
    skipped = verify_bounds(make_family("petersen"), compute=False)
    assert skipped.exact is None
    assert skipped.to_csv_row()[BoundReport.CSV_FIELDS.index("exact")] == ""


def test_verify_bounds_rejects_wrong_value():
    with pytest.raises(BoundViolation):
        verify_bounds(make_family("petersen"), exact=7)


def test_bounds_hold_on_corpus(corpus):
    for g in corpus:
        report = verify_bounds(g)
        assert report.lower <= report.exact <= report.upper


def test_csv_row():
    row = verify_bounds(make_family("cross")).to_csv_row()
    assert row == [write_graph6(make_family("cross")), "6", "1", "4", "1", "5", "5", "5", "true", "true"]


@pytest.mark.parametrize("s, t", [(0, 4), (1, 5), (2, 8)])
def test_kst_exceeds_lower_bound(s, t):
    lower, exact = kst_strict_gap(s, t)
    assert exact > lower


def test_restricted_search_agrees_on_small_spider():
    spider = make_family("spider", 3, 4, 5)
    target = lower_bound_kappa(spider.n, 1)
    verdict = restricted_gap_search(spider, target)
    assert verdict.attainable == (throttling_number(spider, Rule.H).th <= target)


def test_restricted_search_finds_path_schedule():
    path = make_family("path", 10)
    assert restricted_gap_search(path, 6).attainable


def test_restricted_search_refuses_slack():
    with pytest.raises(UnsupportedRange):
        restricted_gap_search(make_family("path", 10), 7)


def test_spider_gap():
    verdict = spider_strict_gap(2)
    assert (verdict.n, verdict.lower) == (37, 12)
    assert verdict.verdict.sizes == (7,)
    assert verdict.exceeds_lower
    assert restricted_gap_search(make_family("path", 37, max_order=None), 12).attainable


def test_spider_gap_range():
    with pytest.raises(UnsupportedRange):
        spider_strict_gap(1)
