import itertools
import random

import networkx as nx
import pytest

from hopforce.errors import Graph6ParseError, GraphError, UnsupportedRange
from hopforce.graph import (Graph, atlas_graphs, bits, canonical_form, canonical_string, cartesian_product,
                            delete_edge, identify, identify_empty_pair, is_induced_subgraph,
                            make_family, parse_graph6, random_graphs, structural_report, to_mask, twin_classes,
                            write_graph6)


def test_bits_and_mask():
    assert list(bits(0b101001)) == [0, 3, 5]
    assert to_mask([0, 3, 5]) == 0b101001
    assert list(bits(0)) == []


def test_graph_rejects_bad_adjacency():
    with pytest.raises(GraphError):
        Graph(2, [0b10, 0])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(33, [])
    with pytest.raises(GraphError):
        Graph(0, [])


def test_graph6_known_strings():
    assert write_graph6(make_family("path", 4)) == "Ch"
    assert parse_graph6("Ch") == make_family("path", 4)
    assert parse_graph6(">>graph6<<Ch\n") == make_family("path", 4)
    assert parse_graph6("@").n == 1


@pytest.mark.parametrize("text, offset", [
    ("C", 1),
    ("Ch~", 2),
    ("C\x7fh", 1),
    ("?", 0),
])
def test_graph6_errors_report_offset(text, offset):
    with pytest.raises(Graph6ParseError) as info:
        parse_graph6(text)
    assert info.value.offset == offset


def test_graph6_order_cap():
    big = nx.to_graph6_bytes(nx.path_graph(40), header=False).strip()
    with pytest.raises(Graph6ParseError):
        parse_graph6(big)
    assert parse_graph6(big, max_order=None).n == 40


def test_graph6_through_networkx(corpus):
    for g in corpus:
        assert parse_graph6(write_graph6(g)) == g


@pytest.mark.parametrize("family, params, n, m", [
    ("path", (8,), 8, 7),
    ("cycle", (7,), 7, 7),
    ("complete", (5,), 5, 10),
    ("empty", (9,), 9, 0),
    ("wheel", (6,), 6, 10),
    ("star", (9,), 9, 8),
    ("complete_bipartite", (3, 5), 8, 15),
    ("spider", (1, 2, 3), 7, 6),
    ("petersen", (), 10, 15),
    ("kst_augmented", (3, 5), 8, 21),
    ("cross", (), 6, 5),
    ("ksp2", (4,), 8, 16),
])
def test_family_sizes(family, params, n, m):
    g = make_family(family, *params)
    assert (g.n, g.edge_count()) == (n, m)


def test_family_labeling():
    wheel = make_family("wheel", 6)
    assert wheel.degree(0) == 5
    spider = make_family("spider", 1, 2, 3)
    assert spider.neighbors(0) == [1, 2, 4]
    kst = make_family("kst_augmented", 3, 5)
    assert kst.degree(3) == 3
    assert all(kst.has_edge(u, v) for u, v in itertools.combinations(range(4, 8), 2))


def test_family_errors():
    with pytest.raises(GraphError):
        make_family("hypercube", 3)
    with pytest.raises(GraphError):
        make_family("cycle", 2)
    with pytest.raises(GraphError):
        make_family("path")


def test_ksp2_honors_order_cap():
    with pytest.raises(GraphError):
        make_family("ksp2", 17)
    with pytest.raises(GraphError):
        make_family("ksp2", 4, max_order=6)
    assert make_family("ksp2", 17, max_order=None).n == 34


def test_cartesian_product_grid():
    g = cartesian_product(make_family("complete", 4), make_family("empty", 5))
    assert (g.n, g.edge_count()) == (20, 30)
    # vertex (i, j) is i * 5 + j
    assert g.has_edge(0, 5) and not g.has_edge(0, 1)


@pytest.mark.parametrize("family, params, kappa, alpha, delta", [
    ("petersen", (), 3, 4, 3),
    ("cross", (), 1, 4, 1),
    ("complete_bipartite", (3, 5), 3, 5, 3),
    ("complete", (4,), 3, 1, 3),
    ("path", (1,), 0, 1, 0),
    ("empty", (3,), 0, 3, 0),
])
def test_structural_report(family, params, kappa, alpha, delta):
    report = structural_report(make_family(family, *params))
    assert (report.kappa, report.alpha, report.delta) == (kappa, alpha, delta)


def test_connectivity_at_most_min_degree(corpus):
    for g in corpus:
        report = structural_report(g)
        assert report.kappa <= report.delta
        assert (report.kappa == 0) == (g.n == 1 or not nx.is_connected(g.to_networkx()))


def test_twin_classes():
    assert twin_classes(make_family("complete_bipartite", 2, 3)) == [[0, 1], [2, 3, 4]]
    assert twin_classes(make_family("complete", 3)) == [[0, 1, 2]]
    assert len(twin_classes(make_family("path", 5))) == 5


def test_canonical_form_is_isomorphism_invariant():
    rng = random.Random(11)
    for g in random_graphs(100, range(1, 13), seed=11):
        key = canonical_string(g)
        for _ in range(10):
            order = list(range(g.n))
            rng.shuffle(order)
            assert canonical_string(g.relabel(order)) == key
        form = canonical_form(g)
        assert parse_graph6(form.graph6) == g.relabel(list(form.labeling))


def test_canonical_form_separates_classes(corpus):
    keys = {canonical_string(g) for g in corpus}
    assert len(keys) == len(corpus)


def _naive_induced(h, g):
    for image in itertools.permutations(range(g.n), h.n):
        if all(h.has_edge(a, b) == g.has_edge(image[a], image[b]) for a, b in itertools.combinations(range(h.n), 2)):
            return True
    return False


def test_induced_subgraph_matches_naive():
    hosts = random_graphs(12, (5, 6, 7), seed=3)
    patterns = atlas_graphs(4)
    for g in hosts:
        for h in patterns:
            found, embedding = is_induced_subgraph(h, g)
            assert found == _naive_induced(h, g)
            if found:
                assert all(h.has_edge(a, b) == g.has_edge(embedding[a], embedding[b])
                           for a, b in itertools.combinations(range(h.n), 2))


def test_induced_subgraph_of_cycle():
    two_k2 = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert is_induced_subgraph(two_k2, make_family("cycle", 6))[0]
    assert not is_induced_subgraph(two_k2, make_family("complete", 4))[0]


def test_identify_and_delete():
    g = make_family("empty", 3)
    assert identify_empty_pair(g, 0, 2).n == 2
    path = make_family("path", 4)
    merged = identify(path, [(0, 2), (2, 0)])
    assert (merged.n, merged.edge_count()) == (3, 2)
    assert identify(make_family("path", 5), [(0, 2), (2, 4)]).n == 3
    with pytest.raises(GraphError):
        identify_empty_pair(path, 0, 1)
    with pytest.raises(GraphError, match="loop"):
        identify(path, [(0, 2), (0, 3)])
    assert delete_edge(path, 1, 2).edges() == [(0, 1), (2, 3)]
    with pytest.raises(GraphError):
        delete_edge(path, 0, 2)


def test_identify_contracts_into_least_member():
    # opposite vertices of C6 merge into 0, leaving two triangles sharing it
    bowtie = identify(make_family("cycle", 6), [(3, 0)])
    assert bowtie.edges() == [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]
    assert identify(make_family("empty", 4), [(1, 3), (0, 2)]).n == 2
    assert identify(make_family("path", 3), []) == make_family("path", 3)


def test_atlas_corpus():
    assert len(atlas_graphs(6)) == 208
    with pytest.raises(UnsupportedRange):
        atlas_graphs(8)
