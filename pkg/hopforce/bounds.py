#!/usr/bin/env python3
"""
Closed-form bounds, family values and constructive witnesses for hopping throttling
"""
import itertools
import logging
import math
from dataclasses import asdict, dataclass

import networkx as nx

from hopforce.errors import BoundViolation, GraphError, UnsupportedRange
from hopforce.forcing import Force, ForceSet, Rule, round_decompose
from hopforce.graph import bits, make_family, popcount, structural_report, to_mask, write_graph6
from hopforce.solvers import INF, ThrottleCertificate, format_value, throttling_number, validate_certificate


def ceil_two_sqrt(x):
    """Least integer j with j >= 2*sqrt(x)"""
    if x < 0:
        raise GraphError(f"square root of negative value {x}")
    j = math.isqrt(4 * x)
    return j if j * j == 4 * x else j + 1


def lower_bound_kappa(n, kappa):
    if n < 1 or not 0 <= kappa <= n - 1:
        raise GraphError(f"connectivity {kappa} outside 0..{n - 1}")
    return ceil_two_sqrt(n - kappa) + kappa - 1


def upper_bound_alpha(n, alpha):
    if not 1 <= alpha <= n:
        raise GraphError(f"independence number {alpha} outside 1..{n}")
    return n - alpha - 1 + ceil_two_sqrt(alpha)


def product_lower_bound(n, kappa):
    """Connectivity bound on no-cost product throttling of a connected graph"""
    return -(-(n + kappa) // 2)


def family_formula(family, *params):
    """Closed-form values known for a family; missing keys have no formula"""
    p = tuple(int(x) for x in params)
    if family == "path":
        (n,) = p
        if n == 1:
            return {"H": 1, "Z": 1, "th_H": 1, "th_Z": 1, "th_star": INF}
        return {"H": 2, "Z": 1, "th_H": ceil_two_sqrt(n - 1), "th_Z": ceil_two_sqrt(n) - 1,
                "th_star": (n + 2) // 2 if n >= 3 else INF}
    if family == "cycle":
        (n,) = p
        return {"H": 3, "Z": 2, "th_H": ceil_two_sqrt(n - 2) + 1}
    if family == "complete":
        (n,) = p
        return {"H": n, "Z": max(n - 1, 1), "th_H": n, "th_star": INF}
    if family == "empty":
        (n,) = p
        return {"H": 1, "Z": n, "th_H": ceil_two_sqrt(n) - 1, "th_Z": n}
    if family == "wheel":
        return {"H": 4, "Z": 3}
    if family == "star":
        (n,) = p
        return {"H": 2, "Z": max(n - 2, 1), "th_H": ceil_two_sqrt(n - 1)}
    if family == "complete_bipartite":
        s, t = sorted(p)
        values = {"H": s + 1, "th_H": ceil_two_sqrt(t) + s - 1}
        if s == 0:
            values.update({"Z": t, "th_Z": t})
        elif t == 1:
            values["Z"] = 1
        else:
            values["Z"] = s + t - 2
        if s >= 2:
            values["th_Z"] = s + t - 1
        return values
    if family == "petersen":
        return {"H": 6, "Z": 5, "th_H": 8, "th_Z": 6}
    if family == "ksp2":
        (s,) = p
        return {"Z": s, "th_H": ceil_two_sqrt(s) + s - 1, "th_Z": s + 1}
    if family == "cross":
        return {"th_H": 5}
    if family == "kst_augmented":
        s, t = p
        return {"th_H": t} if s == 0 else {}
    raise GraphError(f"no closed-form values for family {family!r}")


# witnesses

def _batched_certificate(g, base, batches):
    """Certificate where each batch of targets is forced in one round by active vertices"""
    blue, extinct = base, 0
    forces = []
    for batch in batches:
        active = [v for v in bits(blue & ~extinct) if g.adj[v] & ~blue == 0]
        if len(active) < len(batch):
            raise BoundViolation(f"witness round needs {len(batch)} active vertices, has {len(active)}")
        round_forces = [Force(v, w) for v, w in zip(active, batch)]
        forces.extend(round_forces)
        extinct |= to_mask(f.src for f in round_forces)
        blue |= to_mask(batch)
    schedule = round_decompose(g, ForceSet(base, tuple(forces)), Rule.H)
    cert = ThrottleCertificate(base, schedule, Rule.H)
    validate_certificate(g, cert)
    return cert


def _chunks(vertices, width):
    return [vertices[i:i + width] for i in range(0, len(vertices), width)]


def build_snaking_witness(family, n):
    """Column-by-column schedule of a path or cycle folded into a box of height m"""
    if family == "path":
        if n < 2:
            raise GraphError("path witness needs n >= 2")
        m = math.isqrt(n - 1)
        head = m + 1
        target = ceil_two_sqrt(n - 1)
    elif family == "cycle":
        if n < 3:
            raise GraphError("cycle witness needs n >= 3")
        m = math.isqrt(n - 2)
        head = m + 2
        target = ceil_two_sqrt(n - 2) + 1
    else:
        raise GraphError(f"no snaking witness for family {family!r}")
    g = make_family(family, n)
    # first column plus the vertices outside the box, then one column per round
    cert = _batched_certificate(g, to_mask(range(head)), _chunks(list(range(head, n)), m))
    if cert.th != target:
        raise BoundViolation(f"{family} {n}: snaking gives {cert.th}, formula {target}")
    logging.debug(f"snaking {family} {n}: m={m}, base {head}, pt {cert.pt}")
    return cert


def _empty_part_size(t):
    """Base size that throttles an edgeless graph on t vertices best"""
    return min(range(1, t + 1), key=lambda j: (j + -(-t // j) - 1, j))


def _independent_witness(g, independent):
    independent = sorted(independent)
    j = _empty_part_size(len(independent))
    base = (g.full & ~to_mask(independent)) | to_mask(independent[:j])
    return _batched_certificate(g, base, _chunks(independent[j:], j))


def build_bipartite_witness(s, t):
    if not (0 <= s <= t and t >= 1):
        raise GraphError(f"bipartite witness needs 0 <= s <= t and t >= 1, got ({s}, {t})")
    g = make_family("complete_bipartite", s, t)
    cert = _independent_witness(g, range(s, s + t))
    if cert.th != ceil_two_sqrt(t) + s - 1:
        raise BoundViolation(f"K_{s},{t}: witness gives {cert.th}")
    return cert


def build_alpha_witness(g):
    """Everything outside a maximum independent set blue, edgeless strategy inside it"""
    independent, alpha = nx.max_weight_clique(nx.complement(g.to_networkx()), weight=None)
    cert = _independent_witness(g, independent)
    if cert.th != upper_bound_alpha(g.n, alpha):
        raise BoundViolation(f"independent-set witness gives {cert.th}, bound {upper_bound_alpha(g.n, alpha)}")
    return cert


# verification

@dataclass(frozen=True)
class BoundReport:
    graph6: str
    n: int
    kappa: int
    alpha: int
    delta: int
    lower: int
    exact: object
    upper: int
    tight_lower: bool
    tight_upper: bool
    shortcut: bool = False

    CSV_FIELDS = ("graph6", "n", "kappa", "alpha", "delta", "lower", "exact", "upper",
                  "tight_lower", "tight_upper")

    def to_csv_row(self):
        row = asdict(self)
        row["exact"] = "" if self.exact is None else format_value(self.exact)
        return [str(row[name]).lower() if isinstance(row[name], bool) else str(row[name])
                for name in self.CSV_FIELDS]


def verify_bounds(g, exact=None, compute=True, limits=None):
    report = structural_report(g)
    lower = lower_bound_kappa(g.n, report.kappa)
    upper = upper_bound_alpha(g.n, report.alpha)
    shortcut = report.kappa + report.alpha == g.n
    if shortcut and lower != upper:
        raise BoundViolation(f"kappa + alpha = n but bounds differ: {lower} < {upper}")
    if exact is None:
        if shortcut:
            exact = lower
        elif compute:
            exact = throttling_number(g, Rule.H, limits).th
    if exact is not None and not lower <= exact <= upper:
        raise BoundViolation(f"{write_graph6(g)}: th_H = {exact} outside [{lower}, {upper}]")
    return BoundReport(graph6=write_graph6(g), n=g.n, kappa=report.kappa, alpha=report.alpha,
                       delta=report.delta, lower=lower, exact=exact, upper=upper,
                       tight_lower=exact == lower, tight_upper=exact == upper, shortcut=shortcut)


def kst_strict_gap(s, t, limits=None):
    """(lower bound, exact th_H) for K(s, t) = complement of K_s joined with K_{t-1} + K_1"""
    g = make_family("kst_augmented", s, t)
    report = structural_report(g)
    exact = throttling_number(g, Rule.H, limits).th
    return lower_bound_kappa(g.n, report.kappa), exact


# restricted search for bounds that would need every round to be full

@dataclass(frozen=True)
class GapVerdict:
    target: int
    sizes: tuple
    levels: dict
    attainable: bool


def _low_boundary_sets(g, gx, size, kappa):
    """Vertex sets of the given size with at most kappa members adjacent to the outside"""
    found = set()
    missing = g.n - size
    if missing == 0:
        return {g.full}
    for cut_size in range(kappa + 1):
        for cut in itertools.combinations(range(g.n), cut_size):
            rest = gx.subgraph(v for v in range(g.n) if v not in cut)
            parts = [to_mask(c) for c in nx.connected_components(rest)]
            sizes = [popcount(p) for p in parts]

            def pick(i, need, outside):
                if need == 0:
                    found.add(g.full & ~outside)
                    return
                if i == len(parts):
                    return
                if sizes[i] <= need:
                    pick(i + 1, need - sizes[i], outside | parts[i])
                pick(i + 1, need, outside)

            pick(0, missing, 0)
    return found


def restricted_gap_search(g, target):
    """Decide whether th_H(G) <= target when that bound forces every round to be full

    A base of size k finishing in target - k rounds forces at most k - kappa
    vertices per round. When k + (target - k)(k - kappa) equals n for every
    size that could reach n, each round is full, so at every time at most
    kappa blue vertices are dormant and the search only visits such sets.
    """
    kappa = structural_report(g).kappa
    gx = g.to_networkx()
    sizes = []
    for k in range(kappa + 1, min(target, g.n) + 1):
        reach = k + (target - k) * (k - kappa)
        if reach > g.n and k < g.n:
            raise UnsupportedRange(f"size {k} has slack ({reach} > {g.n}); restricted search is not conclusive")
        if reach == g.n:
            sizes.append(k)
    levels = {}
    attainable = False
    for k in sizes:
        per_round = k - kappa
        rounds = target - k
        current = _low_boundary_sets(g, gx, k, kappa)
        counts = [len(current)]
        for i in range(1, rounds + 1):
            candidates = _low_boundary_sets(g, gx, k + i * per_round, kappa)
            current = {t for t in candidates if any(s & ~t == 0 for s in current)}
            counts.append(len(current))
            if not current:
                break
        levels[k] = tuple(counts)
        logging.debug(f"restricted search target {target}, size {k}: states per level {counts}")
        attainable = attainable or g.full in current
    return GapVerdict(target=target, sizes=tuple(sizes), levels=levels, attainable=attainable)


@dataclass(frozen=True)
class SpiderVerdict:
    m: int
    n: int
    lower: int
    verdict: GapVerdict

    @property
    def exceeds_lower(self):
        return not self.verdict.attainable


def spider_strict_gap(m):
    """Check th_H(S(3m^2-1, 3m^2, 3m^2+1)) > 6m"""
    if m < 2:
        raise UnsupportedRange("the spider gap is stated for m >= 2")
    legs = (3 * m * m - 1, 3 * m * m, 3 * m * m + 1)
    g = make_family("spider", *legs, max_order=None)
    lower = lower_bound_kappa(g.n, 1)
    if lower != 6 * m:
        raise BoundViolation(f"spider lower bound {lower} is not {6 * m}")
    k = 3 * m + 1
    if k + (6 * m - k) * (k - 1) != g.n:
        raise BoundViolation("spider size arithmetic does not close")
    logging.info(f"restricted search on spider {legs} with {g.n} vertices, target {lower}")
    return SpiderVerdict(m=m, n=g.n, lower=lower, verdict=restricted_gap_search(g, lower))
