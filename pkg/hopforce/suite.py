#!/usr/bin/env python3
"""
Regression claims checked by `hopforce verify`

Each claim is a function returning (passed, detail). A claim that raises
counts as failed with the exception as its detail.
"""
import itertools
import logging
import time
from dataclasses import dataclass

from hopforce.bounds import (build_bipartite_witness, build_snaking_witness, ceil_two_sqrt, family_formula,
                             kst_strict_gap, lower_bound_kappa, product_lower_bound, restricted_gap_search,
                             spider_strict_gap, verify_bounds)
from hopforce.errors import HopforceError
from hopforce.extremal import classify_extreme, generate_Gk, minimization_disagreements, throttling_atlas
from hopforce.forcing import Rule, augment, reverse, round_decompose, terminus
from hopforce.graph import (Graph, atlas_graphs, canonical_string, make_family, random_graphs,
                            structural_report, write_graph6)
from hopforce.reference import (naive_forcing_number, naive_pt, naive_pt_of_size, naive_throttling,
                                random_forcing_instances)
from hopforce.solvers import (INF, forcing_number, k_of_pt, min_propagation_time, product_throttling,
                              pt_of_size, throttling_number)

EXPECTED_ATLAS = {1: 1, 2: 2, 3: 7, 4: 35}
EXPECTED_FORBIDDEN = {0: 3, 1: 108}
# descending minimization is quadratic in the union size
MINIMIZATION_ORDERS = {0: ("ascending", "descending"), 1: ("ascending",)}


def forbidden_triple():
    """Canonical forms of 2K_2, K_2 + 2K_1 and 4K_1"""
    return {canonical_string(Graph.from_edges(4, edges)) for edges in ([(0, 1), (2, 3)], [(0, 1)], [])}


@dataclass(frozen=True)
class ClaimResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def row(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<16} {self.seconds:7.1f}s  {self.detail}"


def _mismatches(pairs):
    """pairs of (label, got, expected) -> (passed, detail)"""
    bad = [f"{label}: got {got}, expected {expected}" for label, got, expected in pairs if got != expected]
    if bad:
        return False, "; ".join(bad[:10]) + (f" (+{len(bad) - 10} more)" if len(bad) > 10 else "")
    return True, f"{len(pairs)} value(s) match"


def claim_forcing_table():
    pairs = []
    for n in range(2, 11):
        pairs.append((f"H(P_{n})", forcing_number(make_family("path", n), Rule.H)[0], 2))
    for n in range(3, 11):
        pairs.append((f"H(C_{n})", forcing_number(make_family("cycle", n), Rule.H)[0], 3))
    for n in range(4, 10):
        pairs.append((f"H(W_{n})", forcing_number(make_family("wheel", n), Rule.H)[0], 4))
    for n in range(2, 10):
        pairs.append((f"H(K_1,{n - 1})", forcing_number(make_family("star", n), Rule.H)[0], 2))
    for n in range(1, 9):
        pairs.append((f"H(K_{n})", forcing_number(make_family("complete", n), Rule.H)[0], n))
        pairs.append((f"H(empty_{n})", forcing_number(make_family("empty", n), Rule.H)[0], 1))
    for s, t in itertools.combinations_with_replacement(range(1, 6), 2):
        g = make_family("complete_bipartite", s, t)
        pairs.append((f"H(K_{s},{t})", forcing_number(g, Rule.H)[0], s + 1))
        pairs.append((f"Z(K_{s},{t})", forcing_number(g, Rule.Z)[0], family_formula("complete_bipartite", s, t)["Z"]))
    petersen = make_family("petersen")
    pairs.append(("H(Petersen)", forcing_number(petersen, Rule.H)[0], 6))
    pairs.append(("Z(Petersen)", forcing_number(petersen, Rule.Z)[0], 5))
    return _mismatches(pairs)


def claim_sandwich(corpus):
    bad = []
    for g in corpus:
        h = forcing_number(g, Rule.H)[0]
        z = forcing_number(g, Rule.Z)[0]
        floor_z = forcing_number(g, Rule.FLOORZ)[0]
        delta = structural_report(g).delta
        if not floor_z <= h <= z + 1:
            bad.append(f"{write_graph6(g)}: floorZ={floor_z} H={h} Z={z}")
        if z == delta and h != delta + 1:
            bad.append(f"{write_graph6(g)}: Z=delta={delta} but H={h}")
    return not bad, "; ".join(bad[:5]) or f"{len(corpus)} graph(s), no violations"


def claim_throttling_table():
    pairs = []
    for n in range(1, 17):
        pairs.append((f"th_H(empty_{n})", throttling_number(make_family("empty", n), Rule.H).th, ceil_two_sqrt(n) - 1))
    for n in range(2, 15):
        pairs.append((f"th_H(P_{n})", throttling_number(make_family("path", n), Rule.H).th, ceil_two_sqrt(n - 1)))
        pairs.append((f"snaking P_{n}", build_snaking_witness("path", n).th, ceil_two_sqrt(n - 1)))
    for n in range(3, 15):
        pairs.append((f"th_H(C_{n})", throttling_number(make_family("cycle", n), Rule.H).th, ceil_two_sqrt(n - 2) + 1))
        pairs.append((f"snaking C_{n}", build_snaking_witness("cycle", n).th, ceil_two_sqrt(n - 2) + 1))
    for s, t in itertools.combinations_with_replacement(range(1, 7), 2):
        expected = ceil_two_sqrt(t) + s - 1
        pairs.append((f"th_H(K_{s},{t})", throttling_number(make_family("complete_bipartite", s, t), Rule.H).th,
                      expected))
        pairs.append((f"witness K_{s},{t}", build_bipartite_witness(s, t).th, expected))
    petersen = make_family("petersen")
    pairs.append(("th_H(Petersen)", throttling_number(petersen, Rule.H).th, 8))
    pairs.append(("th_Z(Petersen)", throttling_number(petersen, Rule.Z).th, 6))
    pairs.append(("th_H(cross)", throttling_number(make_family("cross"), Rule.H).th, 5))
    for s in range(1, 7):
        g = make_family("ksp2", s)
        values = family_formula("ksp2", s)
        pairs.append((f"th_H(K_{s}xP_2)", throttling_number(g, Rule.H).th, values["th_H"]))
        pairs.append((f"th_Z(K_{s}xP_2)", throttling_number(g, Rule.Z).th, values["th_Z"]))
    return _mismatches(pairs)


def claim_bounds(corpus, random_count):
    graphs = list(corpus) + random_graphs(random_count, (7, 8), seed=2024)
    shortcuts = 0
    for g in graphs:
        report = verify_bounds(g)
        if report.shortcut:
            shortcuts += 1
            exact = throttling_number(g, Rule.H).th
            if exact != report.exact:
                return False, f"{report.graph6}: kappa + alpha = n gives {report.exact}, search gives {exact}"
    return True, f"{len(graphs)} graph(s) inside the bounds, {shortcuts} by the kappa + alpha = n shortcut"


def claim_strict_gap():
    details = []
    for s, t in ((0, 4), (1, 5), (2, 8)):
        lower, exact = kst_strict_gap(s, t)
        if not exact > lower:
            return False, f"K({s},{t}): th_H = {exact} does not exceed {lower}"
        details.append(f"K({s},{t}) {exact}>{lower}")
    spider = make_family("spider", 3, 4, 5)
    target = lower_bound_kappa(spider.n, 1)
    restricted = restricted_gap_search(spider, target).attainable
    generic = throttling_number(spider, Rule.H).th <= target
    if restricted != generic:
        return False, f"S(3,4,5): restricted search says {restricted}, full search says {generic}"
    details.append(f"S(3,4,5) restricted={restricted} agrees")
    return True, ", ".join(details)


def claim_spider():
    verdict = spider_strict_gap(2)
    if not verdict.exceeds_lower:
        return False, f"S(11,12,13) reaches {verdict.lower} in levels {verdict.verdict.levels}"
    path = make_family("path", verdict.n, max_order=None)
    if not restricted_gap_search(path, verdict.lower).attainable:
        return False, f"restricted search misses the path P_{verdict.n} at {verdict.lower}"
    return True, f"th_H(S(11,12,13)) > {verdict.lower}, levels {verdict.verdict.levels}"


def claim_extremal_counts():
    bad = []
    for t, expected in EXPECTED_ATLAS.items():
        got = throttling_atlas(t)
        if len(got) != expected:
            bad.append(f"th={t}: {len(got)} graph(s), expected {expected}: {' '.join(got)}")
    if set(generate_Gk(0)) != forbidden_triple():
        bad.append(f"G_0 = {sorted(generate_Gk(0))}")
    forbidden = generate_Gk(1)
    if len(forbidden) != EXPECTED_FORBIDDEN[1]:
        bad.append(f"|G_1| = {len(forbidden)}, expected {EXPECTED_FORBIDDEN[1]}: {' '.join(forbidden)}")
    # vertex-deletion minimization must agree with pairwise minimization on the same union
    for k, orders in MINIMIZATION_ORDERS.items():
        for order in minimization_disagreements(k, orders):
            bad.append(f"G_{k}: {order} minimization of the kangaroo union disagrees")
    return not bad, "; ".join(bad) or "atlas counts 1, 2, 7, 35; |G_0| = 3, |G_1| = 108; minimization orders agree"


def claim_forbidden_equivalence(corpus):
    bad = []
    for g in corpus:
        th = throttling_number(g, Rule.H).th
        for k in (0, 1):
            if classify_extreme(g, k).at_least != (th >= g.n - k):
                bad.append(f"{write_graph6(g)} k={k}: th_H = {th}")
    return not bad, "; ".join(bad[:5]) or f"{len(corpus)} graph(s) agree for k = 0, 1"


def claim_products(corpus):
    bad = []
    for g in corpus:
        if product_throttling(g, "x", check=False).value != g.n:
            bad.append(f"{write_graph6(g)}: initial-cost product differs from n")
        if structural_report(g).kappa == 0:
            continue
        star = product_throttling(g, "star", check=False).value
        one_round = k_of_pt(g, 1)
        if star != (INF if one_round is None else one_round):
            bad.append(f"{write_graph6(g)}: th* = {star}, k(G,1) = {one_round}")
        if star < product_lower_bound(g.n, structural_report(g).kappa):
            bad.append(f"{write_graph6(g)}: th* = {star} below the connectivity bound")
    for n in range(3, 13):
        star = product_throttling(make_family("path", n), "star").value
        if star != (n + 2) // 2:
            bad.append(f"P_{n}: th* = {star}")
    for n in range(1, 7):
        if product_throttling(make_family("complete", n), "star").value != INF:
            bad.append(f"K_{n}: finite th*")
    return not bad, "; ".join(bad[:5]) or "product throttling values match"


def claim_reversal(count):
    for g, fs in random_forcing_instances(count, max_n=7, seed=4):
        forward = round_decompose(g, fs, Rule.H)
        backward = round_decompose(g, reverse(g, fs), Rule.H)
        if backward.blue_after(backward.pt) != g.full or backward.base != terminus(g, fs):
            return False, f"{write_graph6(g)}: terminus does not force by the reversed forces"
        t = forward.pt
        for i in range(t + 1):
            if forward.rounds[t - i] & ~backward.blue_after(i):
                return False, f"{write_graph6(g)}: round {t - i} not blue after {i} reversed rounds"
        augmented = round_decompose(augment(g, fs), fs, Rule.Z)
        if augmented.rounds != forward.rounds:
            return False, f"{write_graph6(g)}: augmented Z rounds differ from H rounds"
    return True, f"{count} random force set(s)"


def claim_oracle(corpus):
    bad = []
    for g in (g for g in corpus if g.n <= 5):
        for rule in Rule:
            if forcing_number(g, rule)[0] != naive_forcing_number(g, rule):
                bad.append(f"{write_graph6(g)} {rule.value}: forcing number")
            if throttling_number(g, rule).th != naive_throttling(g, rule):
                bad.append(f"{write_graph6(g)} {rule.value}: throttling")
            for size in range(1, g.n + 1):
                if pt_of_size(g, size, rule) != naive_pt_of_size(g, size, rule):
                    bad.append(f"{write_graph6(g)} {rule.value}: pt of size {size}")
            for base in range(1, g.full + 1):
                if min_propagation_time(g, base, rule)[0] != naive_pt(g, base, rule):
                    bad.append(f"{write_graph6(g)} {rule.value}: pt of {base:b}")
    return not bad, "; ".join(bad[:5]) or "solvers equal the brute-force reference for n <= 5"


def claims(corpus, random_count=200, instances=500):
    """name -> zero-argument check"""
    return {
        "forcing-table": claim_forcing_table,
        "sandwich": lambda: claim_sandwich(corpus),
        "throttling-table": claim_throttling_table,
        "bounds": lambda: claim_bounds(corpus, random_count),
        "strict-gap": claim_strict_gap,
        "spider": claim_spider,
        "extremal-counts": claim_extremal_counts,
        "forbidden": lambda: claim_forbidden_equivalence(corpus),
        "products": lambda: claim_products(corpus),
        "reversal": lambda: claim_reversal(instances),
        "oracle": lambda: claim_oracle(corpus),
    }


def run_suite(only=None, corpus=None, random_count=200, instances=500):
    corpus = atlas_graphs(6) if corpus is None else corpus
    table = claims(corpus, random_count, instances)
    unknown = set(only or ()) - set(table)
    if unknown:
        raise HopforceError(f"unknown claim(s): {', '.join(sorted(unknown))}; known: {', '.join(table)}")
    results = []
    for name, check in table.items():
        if only and name not in only:
            continue
        if name == "spider":
            logging.warning("spider check runs a restricted search on a 37-vertex graph")
        start = time.monotonic()
        try:
            passed, detail = check()
        except HopforceError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        result = ClaimResult(name, passed, detail, time.monotonic() - start)
        logging.info(result.row())
        results.append(result)
    return results
