import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from copgirth.errors import InvalidInputError
from copgirth.expander_cops import (BallCache, CapturePlan, ClampWarning, ExpanderParams, GreedyRobber,
                                    HallFailure, RandomRobber, StationaryRobber, build_capture_plan,
                                    check_ball_bound, execute_capture, girth_exponent_report,
                                    monte_carlo_capture_rate, sample_cop_set, trial_rng)
from copgirth.expansion import second_eigenvalue
from copgirth.generators import complete_graph, named_fixture, random_regular
from copgirth.girth_strategies import cop_bound


def test_params_formulas():
    p = ExpanderParams(2184, 6, 0.5, 0.3, 0.1)
    assert p.kappa == pytest.approx(0.3 * math.log(1.5) / math.log(5))
    assert p.r == math.floor(0.4 * math.log(2184) / math.log(5))
    assert p.p_raw == pytest.approx(2184 ** -p.kappa * math.log(2184) ** 3)
    assert p.clamped and p.p_prob == 1.0
    assert p.chernoff_size == pytest.approx(2 * 2184 ** (1 - p.kappa) * math.log(2184) ** 3)
    hyp = p.hypotheses()
    assert hyp["gamma_lt_half_minus_kappa"] and not hyp["p_not_clamped"]
    for bad in [dict(eps=5), dict(gamma=1.2), dict(delta_slack=0.3), dict(max_degree=2)]:
        kw = dict(n=100, max_degree=6, eps=0.5, gamma=0.3) | bad
        with pytest.raises(InvalidInputError):
            ExpanderParams(**kw)


def test_clamp_gives_every_vertex():
    g = named_fixture("petersen")
    p = ExpanderParams(g.n, 3, 0.5, 0.3)
    with pytest.warns(ClampWarning):
        C = sample_cop_set(g, p, trial_rng(0, 0))
    assert C.tolist() == list(range(g.n))


def test_sampling_is_deterministic(lps513):
    g = lps513.graph
    p = ExpanderParams(g.n, 6, 0.5, 0.3, p_override=0.2)
    a = sample_cop_set(g, p, trial_rng(11, 3))
    b = sample_cop_set(g, p, trial_rng(11, 3))
    assert np.array_equal(a, b) and 0 <= len(a) <= g.n


def test_sample_mean_matches_binomial(lps513):
    g = lps513.graph
    p = ExpanderParams(g.n, 6, 0.5, 0.3, p_override=0.3)
    sizes = np.array([len(sample_cop_set(g, p, trial_rng(s, 0))) for s in range(1000)])
    se = math.sqrt(p.p_prob * (1 - p.p_prob) / g.n) / math.sqrt(len(sizes))
    assert abs(sizes.mean() / g.n - p.p_prob) < 3 * se


def max_deficiency(g, ball, cops, r):
    near = {x: {c for c in cops if g.dist(x, c) <= r} for x in ball}
    best = 0
    for s in range(1, len(ball) + 1):
        for S in itertools.combinations(ball, s):
            best = max(best, s - len(set().union(*(near[x] for x in S))))
    return best


@st.composite
def instances(draw):
    g = draw(st.sampled_from([named_fixture("petersen"), named_fixture("heawood"), random_regular(12, 3, 4),
                              complete_graph(5)]))
    cops = draw(st.lists(st.integers(0, g.n - 1), unique=True, max_size=g.n))
    v = draw(st.integers(0, g.n - 1))
    r = draw(st.integers(0, 2))
    return g, cops, v, r


@given(instances())
@settings(max_examples=120, deadline=None)
def test_hall_duality_and_konig(inst):
    g, cops, v, r = inst
    out = build_capture_plan(g, cops, v, r)
    ball = BallCache(g, r)(v).tolist()
    if len(ball) <= 16:
        deficiency = max_deficiency(g, ball, cops, r)
    else:
        deficiency = None
    if isinstance(out, CapturePlan):
        out.check(g)
        assert deficiency in (None, 0)
    else:
        assert isinstance(out, HallFailure)
        assert out.check(g, cops)
        assert set(out.deficient) <= set(ball)
        if deficiency is not None:
            assert out.matched == len(ball) - deficiency


def test_trivial_plans():
    g = named_fixture("petersen")
    full = build_capture_plan(g, range(g.n), 0, 1)
    assert isinstance(full, CapturePlan) and all(full.assignment[x] == x for x in full.targets)
    empty = build_capture_plan(g, [], 0, 1)
    assert isinstance(empty, HallFailure) and len(empty.deficient) == 1 and empty.check(g, [])
    with pytest.raises(InvalidInputError):
        build_capture_plan(g, [], 0, -1)


def _plans(g, r, p, seed, count):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        C = np.flatnonzero(rng.random(g.n) < p)
        plan = build_capture_plan(g, C, int(rng.integers(g.n)), r)
        if isinstance(plan, CapturePlan):
            out.append((plan, C))
    return out


def test_stationary_robber_caught_when_its_cop_arrives():
    g = named_fixture("girth9_cubic")
    for plan, C in _plans(g, 2, 0.85, 1, 10):
        res = execute_capture(g, plan, StationaryRobber(), C)
        if plan.v in C:
            assert res.capture_round == 0
        else:
            assert res.capture_round <= len(plan.routes[plan.assignment[plan.v]]) - 1


class ArbitraryRobber:
    def __init__(self, seed):
        self.rng = np.random.default_rng(seed)

    def __call__(self, g, robber, cops):
        options = g.closed_neighborhood(robber)
        return int(options[self.rng.integers(len(options))])


def test_plan_soundness_against_many_robbers():
    g = named_fixture("girth9_cubic")
    plans = _plans(g, 2, 0.85, 2, 20)
    for i in range(1000):
        plan, C = plans[i % len(plans)]
        res = execute_capture(g, plan, ArbitraryRobber(i), C)
        assert res.captured and res.capture_round <= plan.r
    for plan, C in plans:
        for robber in (StationaryRobber(), RandomRobber(3), GreedyRobber()):
            assert execute_capture(g, plan, robber, C).capture_round <= plan.r


def test_complete_graph_always_succeeds():
    g = complete_graph(6)
    p = ExpanderParams(g.n, 5, 0.5, 0.3, p_override=1.0)
    assert all(isinstance(build_capture_plan(g, range(6), v, 1), CapturePlan) for v in range(6))
    res = monte_carlo_capture_rate(g, p, 5, seed=0)
    assert res.success_rate == 1.0


def test_sparse_cops_fail_with_valid_witnesses():
    g = named_fixture("heawood")
    p = ExpanderParams(g.n, 3, 0.5, 0.3, p_override=0.05)
    res = monte_carlo_capture_rate(g, p, 20, seed=4)
    assert res.success_rate < 1 and res.witness_checks > 0 and res.witness_failures == 0
    lo, hi = res.ci95
    assert lo <= res.success_rate <= hi


def test_monte_carlo_is_reproducible():
    g = named_fixture("girth9_cubic")
    p = ExpanderParams(g.n, 3, 0.5, 0.3, p_override=0.9)
    a = monte_carlo_capture_rate(g, p, 6, seed=9).as_dict()
    b = monte_carlo_capture_rate(g, p, 6, seed=9).as_dict()
    assert a == b


def test_ball_bound_on_lps(lps513):
    g = lps513.graph
    p = ExpanderParams(g.n, 6, 0.5, 0.3, 0.1)
    rep = check_ball_bound(g, p)
    assert rep["over_degree_bound"] == 0 and rep["over_sqrt_n"] == 0
    assert rep["max_ball"] == 1 + 6 * p.r


def test_exponent_report(lps513, lps513_spectrum):
    g = lps513.graph
    rep = girth_exponent_report(g, lps513_spectrum)
    assert rep["n"] == 13 * (13 ** 2 - 1)
    assert rep["lps_girth_exponent_limit"] == pytest.approx((1 + 2 * math.log(4, 5)) * 3 / 8)
    assert rep["lps_girth_exponent_limit"] == pytest.approx(1.021, abs=5e-4)
    t = (rep["girth"] - 1) // 4
    assert rep["lower"]["t"] == t and rep["lower"]["K"] == cop_bound(5, t)
    up = rep["upper"]["d_over_4_minus_1"]
    assert up["exponent_limit"] == pytest.approx(1 - 0.5 * math.log(1.5, 5))
    assert up["exponent_with_slack"] > up["exponent_limit"]
