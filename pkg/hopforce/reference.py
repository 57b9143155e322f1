#!/usr/bin/env python3
"""
Brute-force reference values for small graphs

Nothing here prunes or compresses states: a state is the literal pair
(blue, extinct) and a round performs any set of forces that are valid at
its start. Meant for n <= 5 cross-checks of the real solvers.
"""
import itertools
import random

from hopforce.forcing import ForceSet, ForcingState, Rule, valid_forces
from hopforce.graph import random_graph, to_mask
from hopforce.solvers import INF


def round_options(g, state, rule):
    """Every state one round away: nonempty sets of valid forces with distinct sources and targets"""
    forces = sorted(valid_forces(g, state, rule))
    seen = set()
    for count in range(1, len(forces) + 1):
        for batch in itertools.combinations(forces, count):
            sources = [f.src for f in batch]
            targets = [f.dst for f in batch]
            if len(set(sources)) < count or len(set(targets)) < count:
                continue
            new = ForcingState(blue=state.blue | to_mask(targets), extinct=state.extinct | to_mask(sources))
            if new not in seen:
                seen.add(new)
                yield new


def naive_pt(g, base, rule):
    rule = Rule.parse(rule)
    layer = {ForcingState.start(base)}
    depth = 0
    visited = set(layer)
    while layer:
        if any(s.blue == g.full for s in layer):
            return depth
        following = set()
        for state in layer:
            for new in round_options(g, state, rule):
                if new not in visited:
                    visited.add(new)
                    following.add(new)
        layer = following
        depth += 1
    return INF


def naive_forcing_number(g, rule):
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            if naive_pt(g, to_mask(combo), rule) != INF:
                return size
    return g.n


def naive_throttling(g, rule):
    best = INF
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            best = min(best, size + naive_pt(g, to_mask(combo), rule))
    return best


def naive_pt_of_size(g, k, rule):
    return min(naive_pt(g, to_mask(combo), rule) for combo in itertools.combinations(range(g.n), k))


def random_force_set(g, rng, rule=Rule.H, attempts=50):
    """A force set coloring all of g, built by random valid forces from random bases; None if none found"""
    for _ in range(attempts):
        size = rng.randint(1, g.n)
        base = to_mask(rng.sample(range(g.n), size))
        state = ForcingState.start(base)
        forces = []
        while state.blue != g.full:
            options = sorted(valid_forces(g, state, rule))
            if not options:
                break
            f = rng.choice(options)
            forces.append(f)
            state = ForcingState(blue=state.blue | 1 << f.dst, extinct=state.extinct | 1 << f.src)
        if state.blue == g.full and forces:
            return ForceSet(base, tuple(forces))
    return None


def random_forcing_instances(count, max_n=7, seed=0, rule=Rule.H):
    """(graph, force set) pairs with 2 <= n <= max_n"""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        g = random_graph(rng, rng.randint(2, max_n))
        fs = random_force_set(g, rng, rule)
        if fs is not None:
            found.append((g, fs))
    return found

