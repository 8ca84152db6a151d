"""Randomized cop placement on expanders and the matching-based capture plan.

Cops start on a random vertex set C. Once the robber picks v, cops are
matched to the vertices of B_r(v) within distance r; a saturating matching
fills the ball in r moves, and the robber cannot leave it in time.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.stats import binomtest

from .errors import InternalError, InvalidInputError
from .graph import INF, Graph, _bfs


class ClampWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ExpanderParams:
    n: int
    max_degree: int
    eps: float
    gamma: float
    delta_slack: float = 0.1
    p_override: float | None = None

    def __post_init__(self):
        if self.max_degree < 3:
            raise InvalidInputError("maximum degree must be >= 3")
        if not 0 < self.eps <= self.max_degree - 2:
            raise InvalidInputError(f"need 0 < eps <= {self.max_degree - 2}")
        if not 0 < self.gamma < 1:
            raise InvalidInputError("gamma must lie in (0, 1)")
        if not 0 < self.delta_slack < 0.25:
            raise InvalidInputError("delta_slack must lie in (0, 1/4)")
        if self.n < 2:
            raise InvalidInputError("need n >= 2")

    @property
    def log_base(self) -> float:
        return math.log(self.max_degree - 1)

    @property
    def kappa(self) -> float:
        return (0.5 - 2 * self.delta_slack) * math.log1p(self.eps) / self.log_base

    @property
    def r(self) -> int:
        return int(math.floor((0.5 - self.delta_slack) * math.log(self.n) / self.log_base + 1e-12))

    @property
    def p_raw(self) -> float:
        if self.p_override is not None:
            return self.p_override
        return self.n ** -self.kappa * math.log(self.n) ** 3

    @property
    def p_prob(self) -> float:
        return min(1.0, self.p_raw)

    @property
    def clamped(self) -> bool:
        return self.p_raw > 1

    @property
    def chernoff_size(self) -> float:
        return 2 * self.n ** (1 - self.kappa) * math.log(self.n) ** 3

    @property
    def ball_bound(self) -> float:
        D = self.max_degree
        return 1 + D / (D - 2) * ((D - 1) ** self.r - 1)

    def hypotheses(self) -> dict:
        """Which of the proof's finite inequalities hold at this n."""
        lg = math.log1p(self.eps) / self.log_base
        return {
            "gamma_le_half_one_minus_log": self.gamma <= 0.5 * (1 - lg),
            "gamma_lt_half_minus_kappa": self.gamma < 0.5 - self.kappa,
            "slack_log_n_ge_1": self.delta_slack * math.log(self.n) / self.log_base >= 1,
            "ball_bound_lt_sqrt_n": self.ball_bound < math.sqrt(self.n),
            "p_not_clamped": not self.clamped,
        }

    def as_dict(self) -> dict:
        return {"n": self.n, "max_degree": self.max_degree, "eps": self.eps, "gamma": self.gamma,
                "delta_slack": self.delta_slack, "kappa": self.kappa, "r": self.r, "p_prob": self.p_prob,
                "p_raw": self.p_raw, "clamped": self.clamped, "chernoff_size": self.chernoff_size,
                "hypotheses": self.hypotheses()}


def sample_cop_set(g: Graph, params: ExpanderParams, rng: np.random.Generator) -> np.ndarray:
    """Independent Bernoulli(p) membership per vertex; returns the sorted vertex ids."""
    if params.clamped:
        warnings.warn(f"p = {params.p_raw:.3g} > 1 clamped to 1: n={g.n} is below the asymptotic regime",
                      ClampWarning, stacklevel=2)
    return np.flatnonzero(rng.random(g.n) < params.p_prob)


class BallCache:
    """Radius-r balls around every vertex, computed on demand."""

    def __init__(self, g: Graph, r: int):
        self.g, self.r = g, r
        self._balls: dict[int, np.ndarray] = {}

    def __call__(self, v: int) -> np.ndarray:
        b = self._balls.get(v)
        if b is None:
            b = np.flatnonzero(_bfs(self.g.adj, (v,), self.g.n, cutoff=self.r) <= self.r)
            self._balls[v] = b
        return b


@dataclass
class CapturePlan:
    v: int
    r: int
    targets: list[int]
    assignment: dict[int, int]            # target -> cop start
    routes: dict[int, list[int]]          # cop start -> path to its target

    def check(self, g: Graph) -> None:
        cops = list(self.assignment.values())
        if len(set(cops)) != len(cops):
            raise InternalError("capture plan assigns one cop twice")
        if set(self.assignment) != set(self.targets):
            raise InternalError("capture plan does not saturate the ball")
        for target, c in self.assignment.items():
            path = self.routes[c]
            if path[0] != c or path[-1] != target or len(path) - 1 > self.r:
                raise InternalError(f"bad route for cop {c}")


@dataclass
class HallFailure:
    v: int
    r: int
    deficient: list[int]
    neighbours: list[int]
    matched: int = 0

    def check(self, g: Graph, cops) -> bool:
        """|B_r(S) cap C| < |S| by direct count."""
        C = set(int(c) for c in cops)
        near = _bfs(g.adj, self.deficient, g.n, cutoff=self.r) <= self.r
        return sum(1 for c in C if near[c]) < len(self.deficient)


def build_capture_plan(g: Graph, cops, v: int, r: int, balls: BallCache | None = None) -> CapturePlan | HallFailure:
    """Maximum matching between B_r(v) and the cops within distance r.

    Returns a plan when the ball is saturated, otherwise a Hall-deficient
    subset of the ball found by alternating search from an exposed vertex.
    """
    if r < 0:
        raise InvalidInputError("r must be >= 0")
    balls = BallCache(g, r) if balls is None else balls
    is_cop = np.zeros(g.n, dtype=bool)
    cops = np.unique(np.asarray(cops, dtype=np.int64))
    is_cop[cops] = True
    targets = balls(v).tolist()
    if all(is_cop[x] for x in targets):
        return CapturePlan(v, r, targets, {x: x for x in targets}, {x: [x] for x in targets})
    cop_ids = {int(c): i for i, c in enumerate(cops)}
    rows, cols = [], []
    for i, x in enumerate(targets):
        for c in balls(x):
            if is_cop[c]:
                rows.append(i)
                cols.append(cop_ids[int(c)])
    H = sp.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(targets), len(cops)))
    match = maximum_bipartite_matching(H, perm_type="column") if len(cops) else np.full(len(targets), -1)
    exposed = [i for i in range(len(targets)) if match[i] < 0]
    if exposed:
        owner = {int(match[i]): i for i in range(len(targets)) if match[i] >= 0}
        seen_left, seen_right = {exposed[0]}, set()
        queue = deque([exposed[0]])
        while queue:
            i = queue.popleft()
            for j in H.indices[H.indptr[i]:H.indptr[i + 1]]:
                j = int(j)
                if j in seen_right:
                    continue
                seen_right.add(j)
                k = owner.get(j)
                if k is None:
                    raise InternalError("augmenting path found after maximum matching")
                if k not in seen_left:
                    seen_left.add(k)
                    queue.append(k)
        return HallFailure(v, r, sorted(targets[i] for i in seen_left), sorted(int(cops[j]) for j in seen_right),
                           len(targets) - len(exposed))
    assignment, routes = {}, {}
    for i, x in enumerate(targets):
        c = int(cops[match[i]])
        assignment[x] = c
        routes[c] = g.geodesic(c, x)
    plan = CapturePlan(v, r, targets, assignment, routes)
    plan.check(g)
    return plan


def check_ball_bound(g: Graph, params: ExpanderParams) -> dict:
    """Largest |B_r(v)| over all v against the degree-sum bound and sqrt(n)."""
    balls = BallCache(g, params.r)
    sizes = [len(balls(v)) for v in range(g.n)]
    bound = params.ball_bound
    return {"r": params.r, "max_ball": max(sizes), "degree_bound": bound, "sqrt_n": math.sqrt(g.n),
            "over_degree_bound": sum(s > bound + 1e-9 for s in sizes),
            "over_sqrt_n": sum(s >= math.sqrt(g.n) for s in sizes)}


# --- robbers -------------------------------------------------------------------

class StationaryRobber:
    name = "stationary"

    def __call__(self, g, robber, cops):
        return robber


class RandomRobber:
    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def __call__(self, g, robber, cops):
        options = g.closed_neighborhood(robber)
        return int(options[self.rng.integers(len(options))])


class GreedyRobber:
    """Step to the closed neighbour farthest from the nearest cop."""

    name = "greedy"

    def __call__(self, g, robber, cops):
        dist = _bfs(g.adj, sorted(set(cops)), g.n)
        return max(g.closed_neighborhood(robber), key=lambda x: (dist[x], -x))


ROBBERS = {"stationary": StationaryRobber, "random": RandomRobber, "greedy": GreedyRobber}


def make_robber(name: str, seed: int = 0):
    if name not in ROBBERS:
        raise InvalidInputError(f"unknown robber strategy {name!r}")
    return ROBBERS[name](seed) if name == "random" else ROBBERS[name]()


@dataclass
class CaptureResult:
    captured: bool
    capture_round: int | None
    rounds: int


def execute_capture(g: Graph, plan: CapturePlan, robber_strategy, cops=None) -> CaptureResult:
    """Cops walk their routes (waiting on arrival); other cops in ``cops`` hold still.

    Raises InternalError if the robber leaves B_r(v) or survives r rounds,
    neither of which a valid plan allows.
    """
    plan.check(g)
    ball = set(plan.targets)
    pos = {c: c for c in plan.routes}
    others = cops if isinstance(cops, (set, frozenset)) else frozenset(() if cops is None else map(int, cops))
    robber = plan.v

    def caught(x):
        # idle cops are the ones without a route; routed cops may have left their start
        return x in here or (x in others and x not in pos)

    def occupied():
        return sorted(here | {c for c in others if c not in pos})

    here = set(pos.values())
    if caught(robber):
        return CaptureResult(True, 0, 0)
    for rnd in range(1, plan.r + 1):
        for c, path in plan.routes.items():
            pos[c] = path[min(rnd, len(path) - 1)]
        here = set(pos.values())
        if caught(robber):
            return CaptureResult(True, rnd, rnd)
        nxt = robber_strategy(g, robber, occupied())
        if nxt not in g.closed_neighborhood(robber):
            raise InvalidInputError(f"illegal robber move {robber} -> {nxt}")
        robber = nxt
        if robber not in ball:
            raise InternalError(f"robber left B_{plan.r}({plan.v}) at round {rnd}")
        if caught(robber):
            return CaptureResult(True, rnd, rnd)
    raise InternalError(f"robber survived {plan.r} rounds against a saturating plan")


@dataclass
class MonteCarloResult:
    params: ExpanderParams
    trials: int
    successes: int
    cop_counts: list[int]
    failures: list[dict] = field(default_factory=list)
    witness_checks: int = 0
    witness_failures: int = 0
    executions: int = 0
    capture_rounds: list[int] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def ci95(self) -> tuple[float, float]:
        ci = binomtest(self.successes, self.trials).proportion_ci(0.95, method="wilson")
        return (float(ci.low), float(ci.high))

    def as_dict(self) -> dict:
        return {"n": self.params.n, "kappa": self.params.kappa, "r": self.params.r,
                "p_prob": self.params.p_prob, "clamped": self.params.clamped,
                "cops": {"min": min(self.cop_counts), "max": max(self.cop_counts),
                         "mean": float(np.mean(self.cop_counts))},
                "chernoff_size": self.params.chernoff_size,
                "success_rate": self.success_rate, "ci95": list(self.ci95), "trials": self.trials,
                "hall_witnesses_checked": self.witness_checks, "hall_witness_failures": self.witness_failures,
                "executions": self.executions,
                "mean_capture_round": float(np.mean(self.capture_rounds)) if self.capture_rounds else None,
                "hypotheses": self.params.hypotheses()}


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Per-trial stream derived from the master seed by counter."""
    return np.random.default_rng([seed, trial])


def monte_carlo_capture_rate(g: Graph, params: ExpanderParams, trials: int, seed: int = 0,
                             starts=None, execute_per_trial: int = 4,
                             robbers=("stationary", "random", "greedy")) -> MonteCarloResult:
    """Fraction of trials in which every robber start admits a saturating plan.

    In each trial, ``execute_per_trial`` starts (evenly spaced) are played out
    against each robber strategy.
    """
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    starts = list(range(g.n)) if starts is None else list(starts)
    balls = BallCache(g, params.r)
    res = MonteCarloResult(params, trials, 0, [])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClampWarning)
        for trial in range(trials):
            rng = trial_rng(seed, trial)
            C = sample_cop_set(g, params, rng)
            res.cop_counts.append(len(C))
            cop_set = frozenset(int(c) for c in C)
            ok, plans = True, {}
            for v in starts:
                out = build_capture_plan(g, C, v, params.r, balls)
                if isinstance(out, HallFailure):
                    ok = False
                    res.witness_checks += 1
                    if not out.check(g, C):
                        res.witness_failures += 1
                    if len(res.failures) < 20:
                        res.failures.append({"trial": trial, "v": v, "deficient": out.deficient})
                    break
                plans[v] = out
            res.successes += ok
            if plans and execute_per_trial:
                keys = sorted(plans)
                step = max(1, len(keys) // execute_per_trial)
                for v in keys[::step][:execute_per_trial]:
                    for name in robbers:
                        out = execute_capture(g, plans[v], make_robber(name, seed=trial), cop_set)
                        res.executions += 1
                        res.capture_rounds.append(out.capture_round)
    return res


# --- exponent arithmetic --------------------------------------------------------

def girth_exponent_report(g: Graph, rep, girth: int | None = None, delta_slack: float = 0.1,
                          eps_certified: float | None = None) -> dict:
    """Finite-n arithmetic for the expander upper bound versus the girth lower bound.

    ``rep`` is a SpectralReport for the (regular) graph. Everything is
    evaluated at the actual n and girth; limit forms are reported alongside.
    """
    from .girth_strategies import cop_bound

    n, d = g.n, rep.d
    p = d - 1
    g_val = g.girth if girth is None else girth
    ln_n, ln_p = math.log(n), math.log(p)

    def upper(eps):
        if eps is None or eps <= 0:
            return None
        eps = min(eps, d - 2)
        e_lim = 1 - 0.5 * math.log1p(eps) / ln_p
        kappa = (0.5 - 2 * delta_slack) * math.log1p(eps) / ln_p
        count = 2 * n ** (1 - kappa) * ln_n ** 3
        return {"eps": eps, "exponent_limit": e_lim, "exponent_with_slack": 1 - kappa,
                "cop_bound_with_slack": count, "girth_exponent_actual": e_lim * ln_n / (g_val * ln_p)}

    eps_limit = (d / rep.lambda2) ** 2 - 1 if rep.lambda2 > 0 else None
    t = max(1, (g_val - 1) // 4)
    K = cop_bound(p, t)
    return {
        "n": n, "d": d, "girth": g_val, "lambda2": rep.lambda2,
        "upper": {"spectral_limit": upper(eps_limit), "d_over_4_minus_1": upper(d / 4 - 1),
                  "certified": upper(eps_certified)},
        "lps_exponent_in_n_limit": 0.5 + math.log(4) / ln_p,
        "lps_girth_exponent_limit": (1 + 2 * math.log(4) / ln_p) * 3 / 8,
        "log_p_n_over_girth": ln_n / (ln_p * g_val),
        "lower": {"t": t, "K": K, "cop_number_exceeds": K,
                  "girth_exponent_actual": math.log(K + 1) / (ln_p * g_val), "girth_exponent_limit": 0.25},
    }
