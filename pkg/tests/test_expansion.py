import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from copgirth.errors import InvalidInputError, PreconditionError, ResourceError
from copgirth.expansion import (check_ball_growth, edge_boundary, h_gamma_bruteforce, isoperimetric_number,
                                second_eigenvalue, size_cap, spectral_hgamma_bound, tanner_bound,
                                vertex_boundary, weak_meyniel_exponent)
from copgirth.generators import (complete_bipartite_graph, cycle_graph, hypercube_graph, named_fixture,
                                 path_graph, random_regular)
from copgirth.graph import Graph


def dense_spectrum(g):
    A = np.zeros((g.n, g.n))
    for u, v in g.edges():
        A[u, v] = A[v, u] = 1
    return np.sort(np.linalg.eigvalsh(A))


def oracle_hgamma(g, gamma):
    cap = math.floor(g.n ** (1 - gamma) + 1e-9)
    return min(Fraction(len(vertex_boundary(g, S)), len(S))
               for s in range(1, min(cap, g.n) + 1) for S in itertools.combinations(range(g.n), s))


def oracle_iso(g):
    return min(Fraction(edge_boundary(g, S), len(S))
               for s in range(1, g.n // 2 + 1) for S in itertools.combinations(range(g.n), s))


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 10))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))))


@given(small_graphs(), st.sampled_from([0.1, 0.3, 0.5, 0.7]))
@settings(max_examples=60, deadline=None)
def test_hgamma_matches_combinations(g, gamma):
    assert h_gamma_bruteforce(g, gamma) == oracle_hgamma(g, gamma)


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_isoperimetric_matches_combinations(g):
    assert isoperimetric_number(g) == oracle_iso(g)


def test_known_expansion_values():
    assert h_gamma_bruteforce(named_fixture("heawood"), 0.5) == Fraction(5, 3)
    assert isoperimetric_number(named_fixture("heawood")) == 1
    # a cycle cut into two arcs loses two edges
    assert isoperimetric_number(cycle_graph(10)) == Fraction(2, 5)
    with pytest.raises(ResourceError):
        h_gamma_bruteforce(named_fixture("hoffman_singleton"), 0.5)


@given(st.sampled_from([(10, 3), (12, 3), (16, 4), (20, 3), (14, 5), (30, 4)]), st.integers(0, 1000))
@settings(max_examples=30, deadline=None)
def test_second_eigenvalue_matches_dense(nd, seed):
    g = random_regular(*nd, seed=seed)
    if not g.is_connected:
        return
    ev = dense_spectrum(g)
    rep = second_eigenvalue(g, tol=1e-10)
    nontrivial = ev[:-1]
    if rep.bipartite:
        nontrivial = ev[1:-1]
    assert abs(rep.lambda2 - nontrivial[-1]) < 1e-6
    assert abs(rep.lambda_min - nontrivial[0]) < 1e-6


@pytest.mark.parametrize("name", ["petersen", "heawood", "tutte_coxeter", "hoffman_singleton"])
def test_fixture_spectra(name):
    g = named_fixture(name)
    ev = dense_spectrum(g)
    rep = second_eigenvalue(g)
    assert abs(rep.lambda2 - ev[-2]) < 1e-6
    worst = max(abs(ev[-2]), abs(ev[1] if rep.bipartite else ev[0]))
    assert rep.ramanujan == (worst <= 2 * math.sqrt(g.min_degree - 1) + 1e-9)


def test_spectral_preconditions():
    with pytest.raises(PreconditionError):
        second_eigenvalue(path_graph(5))
    with pytest.raises(PreconditionError):
        second_eigenvalue(Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]))


def test_tanner_c6_and_errors():
    assert tanner_bound(2, 1, 6, 1) == 2
    for bad in [(2, 0, 6, 1), (2, 5, 6, 1), (2, 1, 6, 4), (2, 1, 6, 0)]:
        with pytest.raises(InvalidInputError):
            tanner_bound(*bad)


def _sides(g):
    side = g.bipartition
    return [[v for v in range(g.n) if side[v] == k] for k in (0, 1)]


@pytest.mark.parametrize("g", [cycle_graph(8), cycle_graph(12), hypercube_graph(3), named_fixture("heawood")],
                         ids=["C8", "C12", "Q3", "heawood"])
def test_tanner_holds_exhaustively(g):
    rep = second_eigenvalue(g)
    d = g.min_degree
    lam = min(Fraction(rep.lambda2_upper) ** 2, Fraction(d * d))
    for X in _sides(g):
        for s in range(1, len(X) + 1):
            if 2 * s > g.n:
                continue
            f = tanner_bound(d, lam, g.n, s)
            for S in itertools.combinations(X, s):
                N = {u for v in S for u in g.adj[v]}
                assert len(N) >= f


@pytest.mark.parametrize("name", ["heawood", "tutte_coxeter"])
def test_spectral_bound_is_a_lower_bound(name):
    g = named_fixture(name)
    b = spectral_hgamma_bound(second_eigenvalue(g), 0.5)
    exact = h_gamma_bruteforce(g, 0.5) if g.n <= 24 else None
    assert b.certified_epsilon is not None and b.certified_epsilon > 0
    if exact is not None:
        assert b.certified_epsilon <= exact


def test_spectral_bound_on_cubes_and_saturation():
    g = hypercube_graph(4)
    b = spectral_hgamma_bound(second_eigenvalue(g), 0.5)
    assert b.certified_epsilon <= h_gamma_bruteforce(g, 0.5)
    k44 = complete_bipartite_graph(4, 4)
    k = spectral_hgamma_bound(second_eigenvalue(k44), 0.5)
    assert k.saturated or k.certified_epsilon <= h_gamma_bruteforce(k44, 0.5)
    with pytest.raises(PreconditionError):
        spectral_hgamma_bound(second_eigenvalue(named_fixture("petersen")))


@pytest.mark.parametrize("g", [named_fixture("heawood"), hypercube_graph(4), cycle_graph(14), named_fixture("petersen")],
                         ids=["heawood", "Q4", "C14", "petersen"])
@pytest.mark.parametrize("gamma", [0.3, 0.5])
def test_ball_growth_exhaustive(g, gamma):
    eps = float(h_gamma_bruteforce(g, gamma))
    rep = check_ball_growth(g, gamma, eps, 4)
    assert rep.exhaustive and rep.ok and rep.sets_checked == 2 ** g.n - 1


def test_ball_growth_detects_overclaimed_expansion():
    g = cycle_graph(14)
    rep = check_ball_growth(g, 0.3, 3.0, 2)
    assert not rep.ok
    S = rep.violations[0]["S"]
    assert len(vertex_boundary(g, S)) < 3 * len(S) or rep.violations[0]["r"] > 1


def test_weak_meyniel_values():
    cor, thm = weak_meyniel_exponent(6, 0.5)
    assert cor == pytest.approx(1 - 0.5 * math.log(1 + 0.5 / 6, 5))
    assert thm == pytest.approx(1 - 0.5 * math.log(1.5, 5))
    assert 0.975 < cor < 0.9752
    with pytest.raises(InvalidInputError):
        weak_meyniel_exponent(6, 5)


def test_size_cap():
    assert size_cap(16, 0.5) == 4
    assert size_cap(2184, 0.3) == math.floor(2184 ** 0.7)
