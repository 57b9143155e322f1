#!/usr/bin/env python3
"""
Graphs at the extremes of hopping throttling

Small throttling numbers come from the grid K_a x complement(K_{b+1}) by
deleting complete edges and identifying empty pairs. Throttling numbers
close to n are described by forbidden induced subgraphs, the minimal
kangaroos whose layer sizes add up to k + 1.
"""
import functools
import itertools
import logging
from dataclasses import dataclass

from hopforce.errors import BoundViolation, GraphError, UnsupportedRange
from hopforce.graph import (Graph, canonical_string, cartesian_product, identify, is_induced_subgraph,
                            make_family, parse_graph6, to_mask)
from hopforce.sharding import run_sharded

MAX_ATLAS_T = 4
MAX_FORBIDDEN_K = 1
KANGAROO_MAX_ORDER = 12
MAX_FREE_PAIRS = 20
CHUNK = 1 << 12


def as_family(keys):
    """Canonical graph6 strings to {key: Graph}, ordered by (n, key)"""
    graphs = {key: parse_graph6(key, max_order=None) for key in keys}
    return dict(sorted(graphs.items(), key=lambda kv: (kv[1].n, kv[0])))


def atlas_lines(family):
    return [key for key, _ in sorted(family.items(), key=lambda kv: (kv[1].n, kv[0]))]


# characterization by grid operations

def empty_pairs(a, b):
    """Same-row vertices in neighboring columns of K_a x complement(K_{b+1})"""
    width = b + 1
    return [(i * width + j, i * width + j + 1) for i in range(a) for j in range(b)]


def _characterization_shard(params):
    a, b = params
    grid = cartesian_product(make_family("complete", a), make_family("empty", b + 1))
    complete = grid.edges()
    pairs = empty_pairs(a, b)
    found = set()
    for removed in range(1 << len(complete)):
        kept = [e for i, e in enumerate(complete) if not removed >> i & 1]
        g = Graph.from_edges(grid.n, kept, max_order=None)
        for chosen in range(1 << len(pairs)):
            merged = identify(g, [p for i, p in enumerate(pairs) if chosen >> i & 1])
            found.add(canonical_string(merged))
    logging.debug(f"grid a={a} b={b}: {len(found)} graph(s)")
    return found


def generate_th_le(t, jobs=1, progress=False):
    """Every graph with th_H <= t, keyed by canonical graph6"""
    if not 0 <= t <= MAX_ATLAS_T:
        raise UnsupportedRange(f"throttling atlas is generated for t <= {MAX_ATLAS_T}, got {t}")
    tasks = [(a, t - a) for a in range(1, t + 1)]
    found = set()
    for part in run_sharded(_characterization_shard, tasks, jobs, progress, desc=f"th<={t}"):
        found |= part
    return as_family(found)


@functools.lru_cache(maxsize=None)
def _atlas_keys(t):
    return frozenset(generate_th_le(t))


def throttling_atlas(t, jobs=1, progress=False):
    """Graphs with th_H exactly t"""
    at_most = generate_th_le(t, jobs, progress)
    below = _atlas_keys(t - 1) if t >= 1 else frozenset()
    return {key: g for key, g in at_most.items() if key not in below}


def small_throttling_class(g):
    """th_H(G) looked up in the atlases when it is at most MAX_ATLAS_T, otherwise None"""
    key = canonical_string(g)
    for t in range(1, MAX_ATLAS_T + 1):
        if key in _atlas_keys(t):
            return t
    return None


# kangaroos

@dataclass(frozen=True)
class KangarooStructure:
    parts: tuple
    S: tuple
    T: tuple


def kangaroo_violations(g, parts, S, T):
    """Descriptions of the layer properties that (S, T) fails for the given parts"""
    problems = []
    r = len(parts)
    if len(S) != r or len(T) != r:
        return [f"need {r} S and T layers"]
    S = [set(layer) for layer in S]
    T = [set(layer) for layer in T]
    for i, k in enumerate(parts):
        if len(S[i]) != k + 1 or len(T[i]) != k + 1:
            problems.append(f"layer {i + 1} sizes differ from {k + 1}")
    if set().union(*S, *T) != set(range(g.n)):
        problems.append("layers do not cover the vertex set")
    if sum(map(len, S)) != len(set().union(*S)):
        problems.append("S layers overlap")
    if sum(map(len, T)) != len(set().union(*T)):
        problems.append("T layers overlap")
    for i in range(r):
        later = to_mask(set().union(*T[i:]))
        if S[i] & set().union(*T[i:]):
            problems.append(f"S_{i + 1} meets a T layer that is not earlier")
        if any(g.adj[v] & later for v in S[i]):
            problems.append(f"S_{i + 1} has an edge to a T layer that is not earlier")
        if i:
            prev = to_mask(T[i - 1])
            if any(not (prev >> v & 1 or g.adj[v] & prev) for v in S[i]):
                problems.append(f"S_{i + 1} is not dominated by T_{i}")
    return problems


def check_kangaroo_structure(g, parts, S, T):
    problems = kangaroo_violations(g, parts, S, T)
    if problems:
        logging.debug(f"not a {tuple(parts)}-kangaroo layout: {'; '.join(problems)}")
    return not problems


def find_kangaroo_structure(g, parts):
    """Search for layers making g a kangaroo of the given parts; None when there are none"""
    parts = tuple(parts)
    sizes = [k + 1 for k in parts]
    if not sum(sizes) <= g.n <= 2 * sum(sizes):
        return None
    r = len(sizes)

    def choose_s(i, T, S, used):
        if i == r:
            covered = used | to_mask(itertools.chain(*T))
            return tuple(S) if covered == g.full else None
        later = to_mask(itertools.chain(*T[i:]))
        prev = to_mask(T[i - 1]) if i else None
        pool = [v for v in range(g.n)
                if not (used | later) >> v & 1 and not g.adj[v] & later
                and (prev is None or prev >> v & 1 or g.adj[v] & prev)]
        for layer in itertools.combinations(pool, sizes[i]):
            found = choose_s(i + 1, T, S + [layer], used | to_mask(layer))
            if found:
                return found
        return None

    def choose_t(i, T, used):
        if i == r:
            S = choose_s(0, T, [], 0)
            return KangarooStructure(parts, S, tuple(T)) if S else None
        for layer in itertools.combinations([v for v in range(g.n) if not used >> v & 1], sizes[i]):
            found = choose_t(i + 1, T + [layer], used | to_mask(layer))
            if found:
                return found
        return None

    structure = choose_t(0, [], 0)
    if structure and not check_kangaroo_structure(g, parts, structure.S, structure.T):
        raise BoundViolation("recovered kangaroo layers fail the layer check")
    return structure


def _overlap_patterns(sizes):
    """Counts |S_i & T_j| for j < i allowed by the layer sizes"""
    r = len(sizes)
    cells = [(i, j) for i in range(r) for j in range(i)]
    s_left, t_left = list(sizes), list(sizes)

    def walk(c, acc):
        if c == len(cells):
            yield dict(acc)
            return
        i, j = cells[c]
        for x in range(min(s_left[i], t_left[j]) + 1):
            s_left[i] -= x
            t_left[j] -= x
            acc[(i, j)] = x
            yield from walk(c + 1, acc)
            s_left[i] += x
            t_left[j] += x

    yield from walk(0, {})


def _layout(sizes, overlap):
    """Vertex numbering of one overlap pattern: T layers first, then fresh S vertices"""
    T, nxt = [], 0
    for size in sizes:
        T.append(list(range(nxt, nxt + size)))
        nxt += size
    used = [0] * len(sizes)
    S = []
    for i, size in enumerate(sizes):
        members = []
        for j in range(i):
            x = overlap.get((i, j), 0)
            members += T[j][used[j]:used[j] + x]
            used[j] += x
        fresh = size - len(members)
        members += range(nxt, nxt + fresh)
        nxt += fresh
        S.append(members)
    return nxt, S, T


def _constraints(n, S, T):
    forbidden = set()
    for i, layer in enumerate(S):
        for j in range(i, len(T)):
            for u in layer:
                for v in T[j]:
                    forbidden.add((min(u, v), max(u, v)))
    free = [p for p in itertools.combinations(range(n), 2) if p not in forbidden]
    needs = [(v, to_mask(T[i - 1])) for i in range(1, len(S)) for v in S[i] if v not in T[i - 1]]
    return free, needs


def _kangaroo_shard(task):
    n, free, needs, start, stop = task
    found = set()
    for chosen in range(start, stop):
        adj = [0] * n
        for i, (u, v) in enumerate(free):
            if chosen >> i & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        if all(adj[v] & mask for v, mask in needs):
            found.add(canonical_string(Graph(n, adj, max_order=None)))
    return found


def generate_kangaroos(parts, verify=False, jobs=1, progress=False):
    """All kangaroos of the given parts up to isomorphism, keyed by canonical graph6"""
    parts = tuple(int(k) for k in parts)
    if not parts or min(parts) < 1:
        raise GraphError(f"kangaroo parts must be positive, got {parts}")
    sizes = [k + 1 for k in parts]
    if 2 * sum(sizes) > KANGAROO_MAX_ORDER:
        raise UnsupportedRange(f"kangaroos of parts {parts} can have more than {KANGAROO_MAX_ORDER} vertices")
    tasks = []
    for overlap in _overlap_patterns(sizes):
        n, S, T = _layout(sizes, overlap)
        free, needs = _constraints(n, S, T)
        if len(free) > MAX_FREE_PAIRS:
            raise UnsupportedRange(f"{len(free)} unconstrained vertex pairs for parts {parts}")
        total = 1 << len(free)
        tasks.extend((n, free, needs, lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK))
    found = set()
    for part in run_sharded(_kangaroo_shard, tasks, jobs, progress, desc=f"kangaroos {parts}"):
        found |= part
    family = as_family(found)
    logging.info(f"{len(family)} kangaroo(s) for parts {parts}")
    if verify:
        for key, g in family.items():
            if find_kangaroo_structure(g, parts) is None:
                raise BoundViolation(f"generated {key} has no {parts}-kangaroo layers")
    return family


# forbidden families

def compositions(total):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def minimize_family(family, order="ascending"):
    """Members that contain no other member as an induced subgraph

    ascending keeps a graph unless a kept smaller one embeds in it;
    descending removes graphs from the largest down while any other
    remaining member embeds.
    """
    if order not in ("ascending", "descending"):
        raise GraphError(f"unknown order {order!r}")
    items = sorted(family.items(), key=lambda kv: (kv[1].n, kv[0]), reverse=order == "descending")
    if order == "ascending":
        kept = {}
        for key, g in items:
            if not any(h.n < g.n and is_induced_subgraph(h, g)[0] for h in kept.values()):
                kept[key] = g
        return as_family(kept)
    remaining = dict(items)
    for key, g in items:
        if any(h.n < g.n and is_induced_subgraph(h, g)[0] for other, h in remaining.items() if other != key):
            del remaining[key]
    return as_family(remaining)


def _minimal_members(family):
    """minimize_family by memoized vertex deletion, for large families"""
    keys = set(family)
    smallest = min(g.n for g in family.values())
    memo = {}

    def contains(g):
        key = canonical_string(g)
        if key not in memo:
            memo[key] = key in keys or (g.n > smallest and any(
                contains(g.induced(v for v in range(g.n) if v != u)) for u in range(g.n)))
        return memo[key]

    return {key: g for key, g in family.items()
            if not any(contains(g.induced(v for v in range(g.n) if v != u)) for u in range(g.n))}


def forbidden_union(k, jobs=1):
    """Kangaroos over every composition of k + 1, before minimization"""
    union = {}
    for parts in compositions(k + 1):
        union.update(generate_kangaroos(parts, jobs=jobs))
    return as_family(union)


@functools.lru_cache(maxsize=None)
def _forbidden_keys(k, jobs):
    union = forbidden_union(k, jobs)
    minimal = _minimal_members(union)
    logging.info(f"forbidden family for k={k}: {len(union)} kangaroo(s), {len(minimal)} minimal")
    return tuple(atlas_lines(minimal))


def generate_Gk(k, jobs=1):
    """Minimal forbidden induced subgraphs for th_H >= n - k"""
    if not 0 <= k <= MAX_FORBIDDEN_K:
        raise UnsupportedRange(f"forbidden families are generated for k <= {MAX_FORBIDDEN_K}, got {k}")
    return as_family(_forbidden_keys(k, jobs))


def minimization_disagreements(k, orders=("ascending", "descending"), jobs=1):
    """Orders in which minimize_family on the kangaroo union misses generate_Gk(k)"""
    union = forbidden_union(k, jobs)
    expected = set(generate_Gk(k, jobs))
    return [order for order in orders if set(minimize_family(union, order)) != expected]


# classification

@dataclass(frozen=True)
class ExtremeVerdict:
    n: int
    k: int
    at_least: bool
    witness: str = None
    embedding: dict = None

    def describe(self):
        relation = ">=" if self.at_least else "<"
        return f"th_H {relation} {self.n - self.k}"


def classify_extreme(g, k):
    """Whether th_H(G) >= n - k, decided by forbidden induced subgraphs"""
    for key, h in generate_Gk(k).items():
        if h.n > g.n:
            continue
        found, embedding = is_induced_subgraph(h, g)
        if found:
            return ExtremeVerdict(g.n, k, False, key, embedding)
    return ExtremeVerdict(g.n, k, True)


def classify_exact(g, max_k=MAX_FORBIDDEN_K):
    """th_H(G) when it is n - k for some k <= max_k, otherwise None"""
    for k in range(max_k + 1):
        if k >= g.n:
            break
        if classify_extreme(g, k).at_least:
            return g.n - k
    return None
