import math

import networkx as nx
import pytest
from hypothesis import assume, given, settings, strategies as st

from copgirth.edgelist import format_edge_list, parse_edge_list
from copgirth.errors import InvalidInputError
from copgirth.generators import (cycle_graph, named_fixture, path_graph, random_digraph, random_regular,
                                 random_tree, subdivide)
from copgirth.graph import INF, Digraph, Graph, digraph_growth_parameter, growth_parameter


def to_nx(g):
    h = nx.DiGraph() if isinstance(g, Digraph) else nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.arcs() if isinstance(g, Digraph) else g.edges())
    return h


def nx_girth(g):
    h = to_nx(g)
    best = math.inf
    for u, v in h.edges():
        h.remove_edge(u, v)
        try:
            best = min(best, nx.shortest_path_length(h, u, v) + 1)
        except nx.NetworkXNoPath:
            pass
        h.add_edge(u, v)
    return best


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 14))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph(n, chosen)


@st.composite
def small_digraphs(draw):
    n = draw(st.integers(1, 12))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Digraph(n, chosen)


@given(small_graphs())
@settings(max_examples=80, deadline=None)
def test_girth_matches_edge_deletion_oracle(g):
    assert g.girth == nx_girth(g)


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_distances_match_networkx(g):
    h = to_nx(g)
    for s in range(g.n):
        ref = nx.single_source_shortest_path_length(h, s)
        d = g.distances(s)
        for v in range(g.n):
            assert d[v] == ref.get(v, INF)


@given(small_digraphs())
@settings(max_examples=60, deadline=None)
def test_digraph_distances_and_reverse(d):
    h = to_nx(d)
    for s in range(d.n):
        ref = nx.single_source_shortest_path_length(h, s)
        assert [int(x) for x in d.distances(s)] == [ref.get(v, INF) for v in range(d.n)]
        back = nx.single_source_shortest_path_length(h.reverse(), s)
        assert [int(x) for x in d.reverse_distances(s)] == [back.get(v, INF) for v in range(d.n)]
    assert d.is_strongly_connected == (d.n > 0 and nx.is_strongly_connected(h))


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_edge_list_round_trip(g):
    text = format_edge_list(g)
    g2, _ = parse_edge_list(text)
    assert g2 == g and format_edge_list(g2) == text


@given(small_digraphs())
@settings(max_examples=60, deadline=None)
def test_digraph_edge_list_round_trip(d):
    # an arc-free file carries no direction marker
    assume(d.m > 0)
    d2, _ = parse_edge_list(format_edge_list(d))
    assert d2 == d


def test_edge_list_parsing():
    g, labels = parse_edge_list("# triangle\na b\nb c\nc a\n")
    assert g.n == 3 and g.girth == 3 and labels == ["a", "b", "c"]
    d, _ = parse_edge_list("n 3\n0 > 1\n1 = 2\n")
    assert d.has_arc(0, 1) and not d.has_arc(1, 0) and d.is_digon(1, 2)
    g, _ = parse_edge_list("n 5\n0 1\n")
    assert g.n == 5 and not g.is_connected
    with pytest.raises(InvalidInputError):
        parse_edge_list("0 1\n1 > 2\n")
    with pytest.raises(InvalidInputError):
        parse_edge_list("0 1 2 3\n")


def test_disconnected_distance_is_sentinel():
    g = Graph(4, [(0, 1), (2, 3)])
    assert g.distances(0)[3] == INF and g.dist(0, 2) == math.inf
    assert not g.is_connected


def test_bipartition_and_regularity():
    assert cycle_graph(6).bipartition is not None
    assert cycle_graph(5).bipartition is None
    assert named_fixture("petersen").is_regular()


def test_geodesic_is_shortest():
    g = named_fixture("tutte_coxeter")
    for v in range(g.n):
        p = g.geodesic(0, v)
        assert p[0] == 0 and p[-1] == v and len(p) - 1 == g.dist(0, v)
        assert all(b in g.neighbors(a) for a, b in zip(p, p[1:]))


def test_growth_parameter_cycle_and_tree():
    # on a cycle every vertex has one vertex at distance h on the far side of each neighbour
    assert growth_parameter(cycle_graph(20), 1) == 1
    assert growth_parameter(cycle_graph(20), 3) == 1
    assert growth_parameter(named_fixture("heawood"), 1) == 2


def growth_oracle(g, h):
    best = None
    for v in range(g.n):
        dv = g.distances(v)
        for u in g.neighbors(v):
            du = g.distances(u)
            c = sum(1 for x in range(g.n) if dv[x] == h and du[x] >= h)
            best = c if best is None else min(best, c)
    return best


@pytest.mark.parametrize("name", ["petersen", "heawood", "mcgee"])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_subdivision_scales_growth(name, k):
    g = named_fixture(name)
    q = growth_parameter(g, 1)
    s = subdivide(g, k)
    assert growth_parameter(s, k + 1) == q == growth_oracle(s, k + 1)


def test_digraph_growth_parameter_on_bidirected():
    g = named_fixture("heawood")
    assert digraph_growth_parameter(Digraph.bidirected(g), 1) == growth_parameter(g, 1)


def test_random_generators_deterministic():
    assert random_regular(20, 3, seed=7) == random_regular(20, 3, seed=7)
    assert random_tree(15, seed=3) == random_tree(15, seed=3)
    assert random_digraph(10, 0.3, seed=1) == random_digraph(10, 0.3, seed=1)
    t = random_tree(25, seed=1)
    assert t.m == 24 and t.is_connected
    assert path_graph(4).m == 3
