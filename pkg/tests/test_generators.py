import networkx as nx
import pytest

from copgirth.errors import InvalidInputError, ResourceError
from copgirth.generators import (FIXTURES, LpsParams, cycle_graph, is_prime, lps_graph, named_fixture, pg_incidence,
                                 quaternion_generators, random_regular, subdivide)


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_registry(name):
    fx = FIXTURES[name]
    g = fx.build()
    h = nxg(g)
    assert g.n == fx.n
    assert {d for _, d in h.degree()} == {fx.degree}
    assert nx.girth(h) == fx.girth == g.girth
    assert nx.is_connected(h)


def test_classic_fixtures_are_the_named_graphs():
    assert nx.is_isomorphic(nxg(named_fixture("petersen")), nx.petersen_graph())
    assert nx.is_isomorphic(nxg(named_fixture("heawood")), nx.heawood_graph())
    assert nx.is_isomorphic(nxg(named_fixture("tutte_coxeter")), nx.LCF_graph(30, [-13, -9, 7, -7, 9, 13], 5))
    assert named_fixture("cage(3,5)") == named_fixture("petersen")


def test_pg_incidence():
    assert nx.is_isomorphic(nxg(pg_incidence(2)), nx.heawood_graph())
    for q in (3, 4, 5):
        g = pg_incidence(q)
        assert g.n == 2 * (q * q + q + 1) and g.girth == 6 and g.min_degree == g.max_degree == q + 1
    assert named_fixture("pg_incidence(3)").n == 26


def test_unknown_fixture():
    with pytest.raises(InvalidInputError):
        named_fixture("nope")
    with pytest.raises(InvalidInputError):
        named_fixture("cage(3,11)")


def test_subdivide():
    assert nx.is_isomorphic(nxg(subdivide(cycle_graph(5), 1)), nx.cycle_graph(10))
    for name in ("petersen", "heawood"):
        g = named_fixture(name)
        for k in range(4):
            s = subdivide(g, k)
            assert s.girth == (k + 1) * g.girth and s.n == g.n + k * g.m


def test_random_regular():
    g = random_regular(20, 3, seed=7)
    assert g == random_regular(20, 3, seed=7)
    assert g.min_degree == g.max_degree == 3 and g.m == 30
    assert len(set(g.edges())) == g.m
    with pytest.raises(InvalidInputError):
        random_regular(7, 3, seed=0)


def test_lps_params_validation():
    for p, q in [(4, 13), (7, 13), (5, 11), (5, 29), (5, 5)]:
        with pytest.raises(InvalidInputError):
            LpsParams(p, q)
    assert LpsParams(5, 13).n == 2184 and LpsParams(5, 13).d == 6


def test_quaternion_solutions():
    for p in (5, 13, 17, 29):
        sols = quaternion_generators(p)
        assert len(sols) == p + 1
        assert all(a * a + b * b + c * c + d * d == p and a > 0 and a % 2 for a, b, c, d in sols)


def test_small_lps_graph():
    res = lps_graph(13, 5)
    g = res.graph
    pv = res.provenance
    assert g.n == 120 and pv["regular"] and pv["bipartite"] and pv["connected"]
    assert g.min_degree == 14 and pv["ramanujan"]
    assert pv["girth"] >= pv["girth_lower_bound"]
    assert lps_graph(13, 5, verify=False).graph == g
    with pytest.raises(ResourceError):
        lps_graph(5, 13, max_n=1000)


def test_is_prime():
    assert [x for x in range(30) if is_prime(x)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
