import dataclasses
import pytest
from hypothesis import given, settings, strategies as st

from copgirth.adversaries import GreedyCops, RandomCops, make_adversary
from copgirth.digraph_strategies import (digraph_params, rho_away, rho_star, simulate_evasion_digraph_growth,
                                         simulate_evasion_outdegree)
from copgirth.dispersion import trap_distance
from copgirth.errors import PreconditionError
from copgirth.generators import cycle_graph, directed_cycle, named_fixture, random_digraph, subdivide
from copgirth.graph import Digraph


@given(st.integers(3, 12), st.floats(0.1, 0.5), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_rho_star_is_trap_distance(n, p, seed):
    d = random_digraph(n, p, seed)
    for v in range(n):
        for c in range(n):
            if c != v:
                assert rho_star(d, v, c) == trap_distance(d, v, c)


@given(st.integers(3, 12), st.floats(0.1, 0.5), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_rho_away_only_differs_across_digons(n, p, seed):
    d = random_digraph(n, p, seed)
    for v in range(n):
        for back in d.in_adj[v]:
            for c in range(n):
                if c == v:
                    continue
                a, s = rho_away(d, v, back, c), rho_star(d, v, c)
                assert a >= s
                if not d.has_arc(v, back):
                    assert a == s


BIDIRECTED = [("petersen", 1, 1), ("heawood", 1, 1), ("girth9_cubic", 2, 1), ("girth9_quartic", 2, 1),
              ("hoffman_singleton", 1, 2)]


@pytest.mark.parametrize("name,t,k", BIDIRECTED)
@pytest.mark.parametrize("adv", ["greedy", "random"])
def test_outdegree_strategy_survives(name, t, k, adv):
    d = Digraph.bidirected(named_fixture(name))
    res = simulate_evasion_outdegree(d, make_adversary(adv, d, k, seed=2), t, k, max_rounds=250)
    assert res.survived and res.invariant_violations == 0


@pytest.mark.parametrize("name,t,k", BIDIRECTED[:3])
def test_growth_with_h1_agrees_with_outdegree(name, t, k):
    d = Digraph.bidirected(named_fixture(name))
    a = simulate_evasion_outdegree(d, GreedyCops(d), t, k, max_rounds=200)
    b = simulate_evasion_digraph_growth(d, GreedyCops(d), t, 1, k, max_rounds=200)
    assert b.survived and b.invariant_violations == 0
    assert [r.target for r in a.trace] == [r.target for r in b.trace]


@pytest.mark.parametrize("adv", ["greedy", "random", "optimal"])
def test_digraph_growth_on_subdivision(adv):
    d = Digraph.bidirected(subdivide(named_fixture("girth9_cubic"), 1))
    res = simulate_evasion_digraph_growth(d, make_adversary(adv, d, 1, seed=5), 1, 2, 1, max_rounds=300,
                                          certify=adv == "greedy")
    assert res.survived and res.invariant_violations == 0


def test_outdegree_fallback_mode():
    d = Digraph.bidirected(named_fixture("hoffman_singleton"))
    res = simulate_evasion_outdegree(d, GreedyCops(d), 1, 6, max_rounds=200)
    assert res.mode == "out-neighbour-count" and res.survived


def test_requires_dispersion():
    d = Digraph.bidirected(cycle_graph(4))
    with pytest.raises(PreconditionError):
        simulate_evasion_outdegree(d, GreedyCops(d), 1, 0)


def test_vacuous_directed_cycle():
    # digon-free with out-degree 1: q = 1 and the bound asks for zero cops
    d = directed_cycle(7)
    p = digraph_params(d, 1)
    assert (p.q, p.K) == (1, 0)
    res = simulate_evasion_outdegree(d, GreedyCops(d), 1, 0, max_rounds=50)
    assert res.vacuous and res.survived and res.states == 50


def test_audits_fire_when_capacity_is_forced(monkeypatch):
    import copgirth.digraph_strategies as ds

    d = Digraph.bidirected(named_fixture("petersen"))
    real = ds.digraph_params
    monkeypatch.setattr(ds, "digraph_params", lambda *a, **kw: dataclasses.replace(real(*a, **kw), capacity=100))
    res = ds.simulate_evasion_outdegree(d, RandomCops(d, 0), 1, 2, max_rounds=500)
    assert res.invariant_violations > 0 and not res.survived


def test_random_adversary_property():
    d = Digraph.bidirected(named_fixture("girth9_quartic"))
    for seed in range(3):
        res = simulate_evasion_outdegree(d, RandomCops(d, seed, bias=0.9), 2, 2, max_rounds=150,
                                         certify=seed == 0)
        assert res.survived and res.invariant_violations == 0
