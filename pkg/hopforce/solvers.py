#!/usr/bin/env python3
"""
Exact solvers: forcing sets, forcing numbers, propagation time and throttling

A process that starts from a base of size k is fully described by its
blue set. A vertex that has forced never has a white neighbor again, so
the dormant vertices are exactly the blue vertices with a white neighbor,
and the remaining k - |dormant| unforced vertices are active and
interchangeable. Searches therefore memoize on the blue bitset per base
size, collapsed further by swapping twin vertices.
"""
import itertools
import logging
import math
import time
from dataclasses import dataclass, field

from hopforce.errors import BoundViolation, ForcingError, GraphError, LimitExceeded
from hopforce.forcing import (Force, ForceSet, RoundSchedule, Rule, round_decompose,
                              schedule_from_dict, schedule_to_dict, z_closure)
from hopforce.graph import bits, popcount, structural_report, to_mask, twin_classes

INF = math.inf


def format_value(value):
    return "inf" if value == INF else str(int(value))


@dataclass(frozen=True)
class SearchLimits:
    seconds: float = 0
    states: int = 0


class _Budget:
    def __init__(self, limits):
        limits = limits or SearchLimits()
        self.deadline = time.monotonic() + limits.seconds if limits.seconds else None
        self.max_states = limits.states or None
        self.states = 0

    def tick(self):
        self.states += 1
        if self.max_states is not None and self.states > self.max_states:
            raise LimitExceeded(f"state limit of {self.max_states} reached")
        if self.deadline is not None and self.states % 512 == 0 and time.monotonic() > self.deadline:
            raise LimitExceeded("time limit reached")


@dataclass(frozen=True)
class ThrottleCertificate:
    base: int
    schedule: object
    rule: Rule = Rule.H

    @property
    def size(self):
        return popcount(self.base)

    @property
    def pt(self):
        return self.schedule.pt

    @property
    def th(self):
        return self.size + self.pt

    def to_dict(self, quantity="throttle"):
        data = schedule_to_dict(self.schedule, self.rule)
        data.update({"parameter": self.rule.value, "quantity": quantity, "value": self.th})
        return data


@dataclass(frozen=True)
class ProductCertificate:
    k: int
    pt_k: float
    variant: str
    value: float = field(default=None)

    def __post_init__(self):
        if self.variant not in ("x", "star"):
            raise GraphError(f"unknown product variant {self.variant!r}")
        expected = product_value(self.k, self.pt_k, self.variant)
        if self.value is None:
            object.__setattr__(self, "value", expected)
        elif self.value != expected:
            raise BoundViolation(f"product value {self.value} does not match k={self.k}, pt={self.pt_k}")

    def to_dict(self):
        return {"parameter": "H", "quantity": f"product_{self.variant}", "k": self.k,
                "pt_k": format_value(self.pt_k), "value": format_value(self.value)}


def product_value(k, pt_k, variant):
    if pt_k == INF:
        return INF
    return k * (1 + pt_k) if variant == "x" else k * pt_k


def validate_certificate(g, cert):
    """Re-execute a certificate and confirm it colors the graph with the claimed numbers"""
    schedule = round_decompose(g, cert.schedule.force_set(), cert.rule)
    if schedule.blue_after(schedule.pt) != g.full:
        raise ForcingError("certificate does not color every vertex")
    if schedule.base != cert.base or schedule.pt != cert.pt:
        raise ForcingError(f"certificate claims pt {cert.pt}, re-execution gives {schedule.pt}")
    return True


def certificate_to_dict(cert, quantity="throttle"):
    return cert.to_dict(quantity)


def certificate_from_dict(g, data):
    """Rebuild a throttling certificate from JSON and check its claimed value"""
    schedule, rule = schedule_from_dict(g, data)
    cert = ThrottleCertificate(schedule.base, schedule, rule)
    validate_certificate(g, cert)
    if "pt" in data and data["pt"] != cert.pt:
        raise ForcingError(f"certificate claims pt {data['pt']}, re-execution gives {cert.pt}")
    if "value" in data and data.get("quantity", "throttle") == "throttle" and data["value"] != cert.th:
        raise ForcingError(f"certificate claims th {data['value']}, re-execution gives {cert.th}")
    return cert


def _choices(groups, capacity):
    """Nonempty unions taking a prefix of each group; costly groups share the capacity"""
    def walk(i, budget, acc):
        if i == len(groups):
            yield acc
            return
        members, costly = groups[i]
        top = min(len(members), budget) if costly else len(members)
        chosen = 0
        for count in range(top + 1):
            if count:
                chosen |= 1 << members[count - 1]
            yield from walk(i + 1, budget - count if costly else budget, acc | chosen)

    for mask in walk(0, capacity, 0):
        if mask:
            yield mask


class ForcingSpace:
    """Colorings reachable from bases of a given size under one rule"""

    def __init__(self, g, rule, limits=None):
        self.g = g
        self.rule = Rule.parse(rule)
        self.full = g.full
        self.kappa = structural_report(g).kappa
        self.classes = twin_classes(g)
        self._twins = [(to_mask(c), [to_mask(c[:i]) for i in range(len(c) + 1)])
                       for c in self.classes if len(c) > 1]
        self.budget = _Budget(limits)
        self.failures = {}

    # state helpers

    def canonical(self, blue):
        for mask, prefixes in self._twins:
            part = blue & mask
            if part:
                blue = (blue & ~mask) | prefixes[popcount(part)]
        return blue

    def canonical_subsets(self, size):
        for combo in itertools.combinations(range(self.g.n), size):
            base = to_mask(combo)
            if self.canonical(base) == base:
                yield base

    def dormant(self, blue):
        adj = self.g.adj
        return to_mask(v for v in bits(blue) if adj[v] & ~blue)

    def z_reach(self, blue):
        reach = 0
        adj = self.g.adj
        for v in bits(blue):
            white_nbrs = adj[v] & ~blue
            if white_nbrs and white_nbrs & (white_nbrs - 1) == 0:
                reach |= white_nbrs
        return reach

    def hop_capacity(self, blue, size):
        return size - popcount(self.dormant(blue))

    def rounds_needed(self, blue, size):
        """Admissible lower bound on the rounds left from this coloring"""
        white = popcount(self.full & ~blue)
        if white == 0:
            return 0
        if self.rule is Rule.Z:
            return 1 if self.z_reach(blue) else INF
        if self.rule is Rule.FLOORZ:
            if self.hop_capacity(blue, size) <= 0 and not self.z_reach(blue):
                return INF
            return -(-white // size)
        active = self.hop_capacity(blue, size)
        if active <= 0:
            return INF
        if white <= active:
            return 1
        # with a white vertex left the dormant vertices form a cut, so at most size - kappa are active
        per_round = max(size - self.kappa, active)
        return 1 + -(-(white - active) // per_round)

    def size_floor(self, size):
        """Fewest rounds any base of this size could need"""
        white = self.g.n - size
        if white <= 0:
            return 0
        if self.rule is Rule.H:
            return INF if size <= self.kappa else -(-white // (size - self.kappa))
        if self.rule is Rule.FLOORZ:
            return -(-white // size) if size else INF
        return 1 if size else INF

    def _white_groups(self, blue):
        return [[v for v in members if not blue >> v & 1] for members in self.classes]

    def round_successors(self, blue, size):
        if self.rule is Rule.Z:
            reach = self.z_reach(blue)
            return [self.canonical(blue | reach)] if reach else []
        active = self.hop_capacity(blue, size)
        reach = self.z_reach(blue) if self.rule is Rule.FLOORZ else 0
        groups = [(whites, not reach >> whites[0] & 1) for whites in self._white_groups(blue) if whites]
        if active <= 0 and not reach:
            return []
        return list({self.canonical(blue | added) for added in _choices(groups, max(active, 0))})

    def step_successors(self, blue, size):
        """Colorings one force away"""
        reach = self.z_reach(blue) if self.rule is not Rule.H else 0
        hop = self.rule is not Rule.Z and self.hop_capacity(blue, size) > 0
        seen = []
        for whites in self._white_groups(blue):
            if whites and (hop or reach >> whites[0] & 1):
                seen.append(self.canonical(blue | 1 << whites[0]))
        return seen

    # searches

    def shortest(self, starts, size, limit=None):
        """Fewest rounds from any start to all blue, as (rounds, canonical path)"""
        limit = self.g.n if limit is None else limit
        parent = {}
        layer = []
        for start in starts:
            start = self.canonical(start)
            if start in parent:
                continue
            parent[start] = None
            if start == self.full:
                return 0, [start]
            if self.rounds_needed(start, size) <= limit:
                layer.append(start)
        depth = 0
        while layer and depth < limit:
            depth += 1
            remaining = limit - depth
            following = []
            for blue in layer:
                self.budget.tick()
                for new in self.round_successors(blue, size):
                    if new in parent:
                        continue
                    parent[new] = blue
                    if new == self.full:
                        return depth, self._path(parent, new)
                    if self.rounds_needed(new, size) <= remaining:
                        following.append(new)
            layer = following
            logging.debug(f"rule {self.rule.value} size {size}: depth {depth}, {len(layer)} open, {len(parent)} seen")
        return INF, None

    def completes(self, base):
        """Chronological path of colorings from base to all blue, or None"""
        size = popcount(base)
        failed = self.failures.setdefault(size, set())
        path = [self.canonical(base)]

        def dfs(blue):
            if blue == self.full:
                return True
            if blue in failed:
                return False
            self.budget.tick()
            for new in self.step_successors(blue, size):
                path.append(new)
                if dfs(new):
                    return True
                path.pop()
            failed.add(blue)
            return False

        return path if dfs(path[0]) else None

    @staticmethod
    def _path(parent, node):
        path = []
        while node is not None:
            path.append(node)
            node = parent[node]
        return path[::-1]

    # turning canonical paths into concrete forces

    def _lift(self, blue, target):
        """Image of a canonical successor under the twin swap that carries canonical(blue) to blue"""
        result = target
        for members in self.classes:
            if len(members) == 1:
                continue
            image = [v for v in members if blue >> v & 1] + [v for v in members if not blue >> v & 1]
            result &= ~to_mask(members)
            result |= to_mask(image[j] for j, m in enumerate(members) if target >> m & 1)
        return result

    def _sources(self, blue, extinct, targets):
        adj = self.g.adj
        forces = []
        hop_targets = []
        for w in bits(targets):
            z_src = None
            if self.rule is not Rule.H:
                z_src = next((v for v in bits(blue & ~extinct) if adj[v] & ~blue == 1 << w), None)
            if z_src is None:
                hop_targets.append(w)
            else:
                forces.append(Force(z_src, w))
        if hop_targets:
            active = [v for v in bits(blue & ~extinct) if adj[v] & ~blue == 0]
            if self.rule is Rule.Z or len(active) < len(hop_targets):
                raise ForcingError("realized round has more targets than active vertices")
            forces.extend(Force(v, w) for v, w in zip(active, hop_targets))
        return forces

    def realize(self, base, path):
        """Concrete force set following a canonical path from the actual base"""
        if self.canonical(base) != path[0]:
            raise ForcingError("path does not start at the base")
        blue, extinct = base, 0
        forces = []
        for target in path[1:]:
            new = self._lift(blue, target)
            batch = self._sources(blue, extinct, new & ~blue)
            forces.extend(batch)
            extinct |= to_mask(f.src for f in batch)
            blue = new
        return ForceSet(base, tuple(forces))

    def schedule(self, base, path):
        return round_decompose(self.g, self.realize(base, path), self.rule)

    def chronological(self, base, path):
        """Ordered forces along a path that adds one vertex per step"""
        blue, extinct = base, 0
        forces = []
        for target in path[1:]:
            new = self._lift(blue, target)
            (force,) = self._sources(blue, extinct, new & ~blue)
            forces.append(force)
            extinct |= 1 << force.src
            blue = new
        return forces


def _trivial_certificate(g, rule):
    return ThrottleCertificate(g.full, RoundSchedule(rounds=(g.full,), round_forces=((),)), Rule.parse(rule))


def _smallest_size(g, rule):
    delta = min(g.degree(v) for v in range(g.n))
    if rule is Rule.H:
        return min(delta + 1, g.n)
    if rule is Rule.Z:
        return max(delta, 1)
    return 1


def is_forcing_set(g, base, rule, limits=None, space=None):
    """(True, chronological list) when some list of forces from base colors every vertex"""
    rule = Rule.parse(rule)
    if base == g.full:
        return True, []
    if rule is Rule.Z:
        if z_closure(g, base) != g.full:
            return False, None
        space = space or ForcingSpace(g, rule, limits)
        _, path = space.shortest([base], popcount(base))
        return True, space.schedule(base, path).forces()
    space = space or ForcingSpace(g, rule, limits)
    path = space.completes(base)
    if path is None:
        return False, None
    return True, space.chronological(base, path)


def forcing_number(g, rule, limits=None):
    """(size, lexicographically least minimum forcing set as a bitset)"""
    rule = Rule.parse(rule)
    space = ForcingSpace(g, rule, limits)
    for size in range(_smallest_size(g, rule), g.n + 1):
        for base in space.canonical_subsets(size):
            if rule is Rule.Z:
                found = z_closure(g, base) == g.full
            else:
                found = base == g.full or space.completes(base) is not None
            if found:
                logging.info(f"forcing number {rule.value} = {size}, witness {sorted(bits(base))}")
                return size, base
    raise ForcingError("no forcing set found, the whole vertex set always forces")


def min_propagation_time(g, base, rule, budget=None, limits=None):
    """(pt, RoundSchedule); pt is INF when no schedule finishes (within budget)"""
    rule = Rule.parse(rule)
    if base & ~g.full:
        raise GraphError("base contains vertices outside the graph")
    if base == g.full:
        return 0, _trivial_certificate(g, rule).schedule
    space = ForcingSpace(g, rule, limits)
    rounds, path = space.shortest([base], popcount(base), budget)
    if rounds == INF:
        return INF, None
    schedule = space.schedule(base, path)
    return schedule.pt, schedule


def _best_of_size(space, size, limit):
    starts = [b for b in space.canonical_subsets(size) if space.rounds_needed(b, size) <= limit]
    rounds, path = space.shortest(starts, size, limit)
    if rounds == INF:
        return None
    base = path[0]
    return ThrottleCertificate(base, space.schedule(base, path), space.rule)


def throttling_number(g, rule, limits=None):
    """Minimum of |B| + pt over all B, by size-ascending branch and bound"""
    rule = Rule.parse(rule)
    space = ForcingSpace(g, rule, limits)
    best = _trivial_certificate(g, rule)
    sizes = range(_smallest_size(g, rule), g.n)
    floor = min([k + space.size_floor(k) for k in sizes] + [g.n])
    for size in sizes:
        if best.th <= floor or size >= best.th:
            break
        need = space.size_floor(size)
        if size + need >= best.th:
            logging.debug(f"size {size} pruned, needs at least {need} rounds")
            continue
        try:
            found = _best_of_size(space, size, best.th - size - 1)
        except LimitExceeded as e:
            raise LimitExceeded(f"{e} at base size {size}", partial=best) from None
        if found is not None:
            best = found
            logging.debug(f"incumbent th {rule.value} = {best.th} (size {best.size}, pt {best.pt})")
    logging.info(f"th {rule.value} = {best.th} after {space.budget.states} states")
    return best


def pt_of_size(g, k, rule, budget=None, limits=None):
    """Least propagation time over bases with k vertices (INF if none finishes)"""
    rule = Rule.parse(rule)
    if not 0 <= k <= g.n:
        raise GraphError(f"size {k} outside 0..{g.n}")
    if k == g.n:
        return 0
    if k == 0:
        return INF
    space = ForcingSpace(g, rule, limits)
    limit = g.n if budget is None else budget
    found = _best_of_size(space, k, limit)
    return INF if found is None else found.pt


def k_of_pt(g, p, rule=Rule.H, limits=None):
    """Least |B| whose propagation time is exactly p, or None"""
    rule = Rule.parse(rule)
    if p < 0:
        raise GraphError("propagation time must be nonnegative")
    if p == 0:
        return g.n
    space = ForcingSpace(g, rule, limits)
    for size in range(1, g.n):
        if space.size_floor(size) > p:
            continue
        for base in space.canonical_subsets(size):
            if space.rounds_needed(base, size) > p:
                continue
            rounds, _ = space.shortest([base], size, p)
            if rounds == p:
                return size
    return None


def product_throttling(g, variant, rule=Rule.H, check=True, limits=None):
    """Initial-cost ('x') or no-cost ('star') product throttling with its certificate"""
    rule = Rule.parse(rule)
    if variant not in ("x", "star"):
        raise GraphError(f"unknown product variant {variant!r}; use x or star")
    smallest, _ = forcing_number(g, rule, limits)
    top = g.n if variant == "x" else g.n - 1
    best = ProductCertificate(k=g.n, pt_k=0, variant="x") if variant == "x" else None
    for k in range(smallest, top + 1):
        if best is not None and best.value != INF:
            # largest pt that could still beat the incumbent
            budget = (best.value - 1) // k - (1 if variant == "x" else 0)
            if budget < 0:
                continue
        else:
            budget = None
        pt_k = pt_of_size(g, k, rule, budget=budget, limits=limits)
        if pt_k == INF:
            continue
        candidate = ProductCertificate(k=k, pt_k=pt_k, variant=variant)
        if best is None or candidate.value < best.value:
            best = candidate
    if best is None:
        best = ProductCertificate(k=None, pt_k=INF, variant=variant)
    if check and rule is Rule.H:
        if variant == "x" and best.value != g.n:
            raise BoundViolation(f"initial-cost product throttling {best.value} differs from n = {g.n}")
        if variant == "star" and best.value != INF:
            one_round = k_of_pt(g, 1, rule, limits)
            if one_round != best.value:
                raise BoundViolation(f"no-cost product throttling {best.value} differs from k(G,1) = {one_round}")
    return best
