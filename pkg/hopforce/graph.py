#!/usr/bin/env python3
"""
Graph values for the forcing toolkit

Vertices are 0..n-1 and every neighborhood is an int bitset, so vertex
sets everywhere in the package are plain ints. networkx does the graph6
codec, the standard families and the structural parameters; pynauty, when
installed, does canonical labeling.
"""
import random
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

try:
    import pynauty
except ImportError:
    pynauty = None

from hopforce.errors import GraphError, Graph6ParseError, UnsupportedRange

MAX_ORDER = 32
CANON_FALLBACK_LIMIT = 12
GRAPH6_HEADER = b">>graph6<<"


def bits(mask):
    """Yield the members of a vertex bitset in increasing order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices):
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def popcount(mask):
    return mask.bit_count()


class Graph:
    """Simple undirected graph on 0..n-1 stored as neighbor bitsets"""

    __slots__ = ("n", "adj")

    def __init__(self, n, adj, max_order=MAX_ORDER):
        if n < 1:
            raise GraphError("a graph needs at least one vertex")
        if max_order is not None and n > max_order:
            raise GraphError(f"{n} vertices exceeds the cap of {max_order}")
        adj = tuple(int(a) for a in adj)
        if len(adj) != n:
            raise GraphError(f"expected {n} neighborhoods, got {len(adj)}")
        full = (1 << n) - 1
        for v, nbrs in enumerate(adj):
            if nbrs >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            if nbrs & ~full:
                raise GraphError(f"vertex {v} has a neighbor outside 0..{n - 1}")
            for u in bits(nbrs):
                if not adj[u] >> v & 1:
                    raise GraphError(f"edge {v}-{u} is not symmetric")
        self.n = n
        self.adj = adj

    @classmethod
    def from_edges(cls, n, edges, max_order=MAX_ORDER):
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} outside 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, max_order=max_order)

    @classmethod
    def from_networkx(cls, gx, max_order=MAX_ORDER):
        """Vertices are renumbered by sorted node order"""
        nodes = sorted(gx.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in gx.edges()]
        return cls.from_edges(len(nodes), edges, max_order=max_order)

    def to_networkx(self):
        gx = nx.Graph()
        gx.add_nodes_from(range(self.n))
        gx.add_edges_from(self.edges())
        return gx

    @property
    def full(self):
        return (1 << self.n) - 1

    def edges(self):
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self):
        return sum(popcount(a) for a in self.adj) // 2

    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def degree(self, v):
        return popcount(self.adj[v])

    def neighbors(self, v):
        return list(bits(self.adj[v]))

    def relabel(self, order):
        """Graph whose vertex i is old vertex order[i]"""
        position = {old: new for new, old in enumerate(order)}
        if sorted(position) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation of the vertices")
        return Graph.from_edges(self.n, [(position[u], position[v]) for u, v in self.edges()],
                                max_order=None)

    def induced(self, vertices):
        """Subgraph induced by the given vertices, renumbered in increasing order"""
        chosen = sorted(set(vertices))
        position = {old: new for new, old in enumerate(chosen)}
        edges = [(position[u], position[v]) for u, v in self.edges() if u in position and v in position]
        return Graph.from_edges(len(chosen), edges, max_order=None)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count()}, g6={write_graph6(self)!r})"


@dataclass(frozen=True)
class StructuralReport:
    kappa: int
    alpha: int
    delta: int


@dataclass(frozen=True)
class CanonicalForm:
    labeling: tuple
    graph6: str


# graph6

def _read_order(data, start):
    if start >= len(data):
        raise Graph6ParseError("missing vertex count", start)
    if data[start] != 126:
        return data[start] - 63, start + 1
    if start + 1 < len(data) and data[start + 1] == 126:
        width, first = 6, start + 2
    else:
        width, first = 3, start + 1
    if len(data) < first + width:
        raise Graph6ParseError("truncated vertex count", len(data))
    n = 0
    for byte in data[first:first + width]:
        n = (n << 6) | (byte - 63)
    return n, first + width


def parse_graph6(text, max_order=MAX_ORDER):
    if isinstance(text, str):
        try:
            text = text.encode("ascii")
        except UnicodeEncodeError as e:
            raise Graph6ParseError("non-ASCII character", e.start) from None
    data = bytes(text).rstrip(b"\r\n")
    start = len(GRAPH6_HEADER) if data.startswith(GRAPH6_HEADER) else 0
    for offset in range(start, len(data)):
        if not 63 <= data[offset] <= 126:
            raise Graph6ParseError(f"invalid graph6 character {chr(data[offset])!r}", offset)
    n, body = _read_order(data, start)
    if n < 1:
        raise Graph6ParseError("record encodes an empty graph", start)
    if max_order is not None and n > max_order:
        raise Graph6ParseError(f"{n} vertices exceeds the cap of {max_order}", start)
    expected = body + (n * (n - 1) // 2 + 5) // 6
    if len(data) < expected:
        raise Graph6ParseError(f"truncated edge vector, expected {expected} bytes", len(data))
    if len(data) > expected:
        raise Graph6ParseError("trailing bytes after edge vector", expected)
    gx = nx.from_graph6_bytes(data[start:])
    return Graph.from_networkx(gx, max_order=max_order)


def write_graph6(g):
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").strip()


# families

def _spider(legs, max_order):
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges, max_order=max_order)


def _kst_augmented(s, t, max_order):
    # K_{s,t} with U = 0..s-1, then the t-1 vertices of V after vertex s become a clique
    g = Graph.from_networkx(nx.complete_bipartite_graph(s, t), max_order=max_order)
    clique = range(s + 1, s + t)
    extra = [(u, v) for u in clique for v in clique if u < v]
    return Graph.from_edges(s + t, g.edges() + extra, max_order=max_order)


# name -> (parameter count, minimum values, builder)
FAMILIES = {
    "path": (1, (1,), lambda mo, n: Graph.from_networkx(nx.path_graph(n), mo)),
    "cycle": (1, (3,), lambda mo, n: Graph.from_networkx(nx.cycle_graph(n), mo)),
    "complete": (1, (1,), lambda mo, n: Graph.from_networkx(nx.complete_graph(n), mo)),
    "empty": (1, (1,), lambda mo, n: Graph.from_networkx(nx.empty_graph(n), mo)),
    "wheel": (1, (4,), lambda mo, n: Graph.from_networkx(nx.wheel_graph(n), mo)),
    "star": (1, (2,), lambda mo, n: Graph.from_networkx(nx.star_graph(n - 1), mo)),
    "complete_bipartite": (2, (0, 1), lambda mo, s, t: Graph.from_networkx(nx.complete_bipartite_graph(s, t), mo)),
    "spider": (3, (1, 1, 1), lambda mo, a, b, c: _spider((a, b, c), mo)),
    "petersen": (0, (), lambda mo: Graph.from_networkx(nx.petersen_graph(), mo)),
    "kst_augmented": (2, (0, 2), lambda mo, s, t: _kst_augmented(s, t, mo)),
    "cross": (0, (), lambda mo: _spider((1, 1, 3), mo)),
    "ksp2": (1, (1,), lambda mo, s: cartesian_product(make_family("complete", s, max_order=None),
                                                      make_family("path", 2), max_order=mo)),
}


def make_family(family, *params, max_order=MAX_ORDER):
    if family not in FAMILIES:
        raise GraphError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    arity, minimums, builder = FAMILIES[family]
    if len(params) != arity:
        raise GraphError(f"family {family} takes {arity} parameter(s), got {len(params)}")
    params = tuple(int(p) for p in params)
    for value, low in zip(params, minimums):
        if value < low:
            raise GraphError(f"family {family}: parameter {value} below minimum {low}")
    if family == "complete_bipartite" and params[0] + params[1] < 1:
        raise GraphError("complete_bipartite needs at least one vertex")
    return builder(max_order, *params)


def cartesian_product(g, h, max_order=MAX_ORDER):
    """Vertex (i, j) of g x h gets index i * h.n + j"""
    if max_order is not None and g.n * h.n > max_order:
        raise GraphError(f"product has {g.n * h.n} vertices, cap is {max_order}")
    product = nx.cartesian_product(g.to_networkx(), h.to_networkx())
    edges = [(i * h.n + j, k * h.n + l) for (i, j), (k, l) in product.edges()]
    return Graph.from_edges(g.n * h.n, edges, max_order=max_order)


# structure

def structural_report(g):
    gx = g.to_networkx()
    kappa = 0 if g.n == 1 else nx.node_connectivity(gx)
    _, alpha = nx.max_weight_clique(nx.complement(gx), weight=None)
    delta = min(g.degree(v) for v in range(g.n))
    return StructuralReport(kappa=kappa, alpha=alpha, delta=delta)


def twins(g, u, v):
    """u and v have the same neighbors apart from each other"""
    clear = ~((1 << u) | (1 << v))
    return (g.adj[u] & clear) == (g.adj[v] & clear)


def twin_classes(g):
    """Partition of the vertices into twin classes, each sorted, in order of least member"""
    classes = []
    for v in range(g.n):
        for cls in classes:
            if twins(g, cls[0], v):
                cls.append(v)
                break
        else:
            classes.append([v])
    return classes


# canonical labeling

def _refine(g, cells):
    while True:
        color = {}
        for index, cell in enumerate(cells):
            for v in cell:
                color[v] = index
        refined = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups = {}
            for v in cell:
                signature = tuple(sorted(color[u] for u in bits(g.adj[v])))
                groups.setdefault(signature, []).append(v)
            split = split or len(groups) > 1
            refined.extend(groups[key] for key in sorted(groups))
        cells = refined
        if not split:
            return cells


def _leaf_code(g, order):
    position = {old: new for new, old in enumerate(order)}
    return tuple(sum(1 << position[u] for u in bits(g.adj[v])) for v in order)


def _search_canonical(g, cells, best):
    cells = _refine(g, cells)
    if all(len(cell) == 1 for cell in cells):
        order = [cell[0] for cell in cells]
        code = _leaf_code(g, order)
        if best[0] is None or code < best[0]:
            best[0], best[1] = code, order
        return
    target = min((i for i, cell in enumerate(cells) if len(cell) > 1), key=lambda i: (len(cells[i]), i))
    tried = []
    for v in cells[target]:
        # swapping twins is an automorphism, so their subtrees give the same leaves
        if any(twins(g, u, v) for u in tried):
            continue
        tried.append(v)
        rest = [u for u in cells[target] if u != v]
        _search_canonical(g, cells[:target] + [[v], rest] + cells[target + 1:], best)


def canonical_form(g):
    if pynauty is not None:
        adjacency = {v: g.neighbors(v) for v in range(g.n)}
        order = list(pynauty.canon_label(pynauty.Graph(g.n, directed=False, adjacency_dict=adjacency)))
    else:
        if g.n > CANON_FALLBACK_LIMIT:
            raise UnsupportedRange(f"canonical form without pynauty is limited to {CANON_FALLBACK_LIMIT} vertices")
        best = [None, None]
        _search_canonical(g, [list(range(g.n))], best)
        order = best[1]
    return CanonicalForm(labeling=tuple(order), graph6=write_graph6(g.relabel(order)))


def canonical_string(g):
    return canonical_form(g).graph6


def canonical_backend():
    return "pynauty" if pynauty is not None else "refinement"


def is_induced_subgraph(h, g):
    """(True, embedding h-vertex -> g-vertex) when h is an induced subgraph of g"""
    if h.n > g.n or h.edge_count() > g.edge_count():
        return False, None
    matcher = GraphMatcher(g.to_networkx(), h.to_networkx())
    for mapping in matcher.subgraph_isomorphisms_iter():
        return True, {hv: gv for gv, hv in mapping.items()}
    return False, None


# characterization operations

def identify(g, groups):
    """Merge each group of pairwise non-adjacent vertices into its least member"""
    merges = nx.Graph()
    merges.add_nodes_from(range(g.n))
    for group in groups:
        group = sorted(group)
        for v in group:
            if g.adj[v] & to_mask(group):
                raise GraphError(f"cannot identify adjacent vertices in {group}")
        nx.add_path(merges, group)
    gx = g.to_networkx()
    for block in nx.connected_components(merges):
        keep, *rest = sorted(block)
        for v in rest:
            gx = nx.contracted_nodes(gx, keep, v, self_loops=True, copy=False)
    loops = list(nx.nodes_with_selfloops(gx))
    if loops:
        raise GraphError(f"identification creates a loop at vertex {loops[0]}")
    return Graph.from_networkx(gx)


def describe(g):
    """One-line summary used in logs and plain output"""
    report = structural_report(g)
    return f"n={g.n} m={g.edge_count()} kappa={report.kappa} alpha={report.alpha} delta={report.delta}"


def identify_empty_pair(g, u, v):
    if u == v:
        raise GraphError(f"cannot identify vertex {u} with itself")
    if g.has_edge(u, v):
        raise GraphError(f"{u} and {v} are adjacent, not an empty pair")
    return identify(g, [(u, v)])


def delete_edge(g, u, v):
    if not g.has_edge(u, v):
        raise GraphError(f"edge {u}-{v} is not present")
    adj = list(g.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(g.n, adj, max_order=None)


# corpora

def atlas_graphs(max_order=6):
    """One graph per isomorphism class on 1..max_order vertices, from the networkx atlas"""
    if not 1 <= max_order <= 7:
        raise UnsupportedRange(f"the graph atlas covers 1..7 vertices, got {max_order}")
    return [Graph.from_networkx(gx) for gx in nx.graph_atlas_g()[1:] if gx.number_of_nodes() <= max_order]


def random_graph(rng, n):
    return Graph.from_networkx(nx.gnp_random_graph(n, rng.random(), seed=rng.randrange(2 ** 32)))


def random_graphs(count, orders, seed=0):
    rng = random.Random(seed)
    return [random_graph(rng, rng.choice(orders)) for _ in range(count)]
