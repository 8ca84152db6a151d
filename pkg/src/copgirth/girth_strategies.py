"""Weight-ledger robber strategies on undirected graphs of large girth.

Both strategies share one engine parameterised by the segment length h.
With h = 1 the robber takes single steps (minimum-degree version); with
h > 1 he commits to a geodesic segment of length h per state (growth
version). All weights are exact ``Fraction`` powers of r = (1 - 1/t) q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .adversaries import validate_move
from .errors import InvalidInputError, PreconditionError
from .graph import Graph, growth_parameter


def cop_bound(q: int, t: int) -> int:
    """floor(q^t / (e t)), the largest cop count the theorems defeat."""
    if q < 0 or t < 1:
        raise InvalidInputError("need q >= 0 and t >= 1")
    K = int(math.floor(q ** t / (math.e * t)))
    # guard against float rounding at the boundary
    while K > 0 and math.e * t * K > q ** t:
        K -= 1
    return K


def ledger_capacity(q: int, t: int) -> int:
    """Largest cop count for which the ledger induction closes.

    For t >= 2 the step W' < r^t + K <= q r^(t-1) needs K <= q r^(t-1) / t;
    for t = 1 (r = 0) it needs K < q.
    """
    if t == 1:
        return max(q - 1, 0)
    r = Fraction(t - 1, t) * q
    return math.floor(q * r ** (t - 1) / t)


@dataclass(frozen=True)
class StrategyParams:
    t: int
    h: int
    q: int
    r: Fraction
    K: int
    capacity: int
    girth_required: int

    @classmethod
    def make(cls, t: int, q: int, h: int = 1) -> "StrategyParams":
        if t < 1 or h < 1:
            raise InvalidInputError("t and h must be >= 1")
        if q < 1:
            raise PreconditionError("branching q must be >= 1")
        return cls(t, h, q, Fraction(t - 1, t) * q, cop_bound(q, t), ledger_capacity(q, t),
                   4 * h * (t + 1) - 3)

    @property
    def threshold(self) -> Fraction:
        """r^(t-1): a class lighter than this is safe."""
        return self.r ** (self.t - 1)

    @property
    def ceiling(self) -> Fraction:
        """q r^(t-1): the total weight must stay strictly below this."""
        return self.q * self.threshold

    @property
    def class_radius(self) -> int:
        return 2 * self.h * (self.t + 1) - 2

    def weight(self, rho: int) -> Fraction:
        return self.r ** (self.t + 1 - math.ceil(Fraction(rho + 2, 2 * self.h)))

    def as_dict(self) -> dict:
        return {"t": self.t, "h": self.h, "q": self.q, "r": str(self.r), "K": self.K,
                "capacity": self.capacity, "girth_required": self.girth_required}


@dataclass
class WeightLedger:
    targets: tuple[int, ...]
    classes: list[int | None]          # per cop: class index or None
    weights: list[Fraction]
    W_i: list[Fraction]
    k: int
    overlaps: int = 0

    @property
    def W(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def members(self, j: int) -> list[int]:
        return [c for c, cls in enumerate(self.classes) if cls == j]

    def argmin(self) -> int:
        # targets are sorted, so the first minimum is the lowest vertex id
        return min(range(len(self.W_i)), key=lambda i: (self.W_i[i], self.targets[i]))


def strategy_targets(g: Graph, v: int, y: int, params: StrategyParams) -> tuple[int, ...]:
    """The q lowest-id vertices at distance h from v and at least h from y."""
    dv, dy = g.distances(v), g.distances(y)
    pool = [u for u in range(g.n) if dv[u] == params.h and dy[u] >= params.h]
    if len(pool) < params.q:
        raise PreconditionError(f"vertex {v} has only {len(pool)} admissible targets away from {y}, "
                                f"need q={params.q}")
    return tuple(pool[:params.q])


def classify_cops(g: Graph, v: int, y: int, cops, params: StrategyParams, targets=None) -> WeightLedger:
    """Class assignment and weights at a state with the robber on v having come from y."""
    targets = strategy_targets(g, v, y, params) if targets is None else tuple(targets)
    dv = g.distances(v)
    dts = [g.distances(u) for u in targets]
    classes, weights, overlaps = [], [], 0
    for c in cops:
        rho = int(dv[c])
        hit = [i for i, du in enumerate(dts) if rho <= params.class_radius and du[c] == rho - params.h]
        overlaps += len(hit) > 1
        if hit:
            classes.append(hit[0])
            weights.append(params.weight(rho))
        else:
            classes.append(None)
            weights.append(Fraction(1))
    k = sum(cls is None for cls in classes)
    W_i = [Fraction(k, params.q) + sum((w for w, cls in zip(weights, classes) if cls == i), Fraction(0))
           for i in range(params.q)]
    return WeightLedger(targets, classes, weights, W_i, k, overlaps)


def classify_cops_degree(g: Graph, v: int, v_prev: int, cops, params: StrategyParams) -> WeightLedger:
    if params.h != 1:
        raise InvalidInputError("degree classification uses h = 1")
    if v_prev not in g.closed_neighborhood(v):
        raise PreconditionError("v_prev must lie in N[v]")
    return classify_cops(g, v, v_prev, cops, params)


def robber_step_degree(ledger: WeightLedger, params: StrategyParams) -> int:
    return ledger.targets[ledger.argmin()]


@dataclass
class TraceRow:
    state: int
    v: int
    y: int
    target: int
    W: Fraction
    max_Wi: Fraction
    min_Wi: Fraction
    safe: bool

    def tsv(self) -> str:
        return "\t".join(map(str, (self.state, self.v, self.target, self.W, self.max_Wi, self.min_Wi,
                                   "safe" if self.safe else "UNSAFE")))


TRACE_HEADER = "state\tv_s\tu_j\tW\tmax_W_i\tmin_W_i\tsafety"


@dataclass
class EvasionResult:
    params: StrategyParams
    cops: int
    mode: str
    survived: bool
    states: int
    rounds: int
    trace: list[TraceRow]
    violations: dict[str, int] = field(default_factory=dict)
    examples: list[dict] = field(default_factory=list)
    periodic: bool = False
    vacuous: bool = False

    @property
    def invariant_violations(self) -> int:
        return sum(self.violations.values())

    def as_dict(self) -> dict:
        return {"survived": self.survived, "rounds": self.rounds, "states": self.states,
                "cops": self.cops, "bound_K": self.params.K, "capacity": self.params.capacity,
                "mode": self.mode, "vacuous": self.vacuous, "periodic": self.periodic,
                "invariant_violations": self.invariant_violations, "violations": dict(self.violations),
                "params": self.params.as_dict()}


_CHECKS = ("total_weight", "contraction", "purge", "safety", "state_invariant", "class_overlap", "capture")


class _Audit:
    def __init__(self, limit: int = 20):
        self.counts = {name: 0 for name in _CHECKS}
        self.examples: list[dict] = []
        self.limit = limit

    def fail(self, name: str, **info):
        self.counts[name] += 1
        if len(self.examples) < self.limit:
            self.examples.append({"check": name, **info})


def params_for_graph(g: Graph, t: int, h: int = 1, q: int | None = None) -> StrategyParams:
    """Parameters with q = delta - 1 (h = 1) or the measured growth parameter."""
    measured = g.min_degree - 1 if h == 1 else growth_parameter(g, h)
    if q is None:
        q = measured
    elif q > measured:
        raise PreconditionError(f"graph has ({h},{measured})-growth, not ({h},{q})")
    return StrategyParams.make(t, q, h)


def simulate_evasion(g: Graph, adversary: Callable, params: StrategyParams, n_cops: int, *,
                     max_rounds: int = 1000, start: int = 0, first: int | None = None,
                     stop_on_cycle: bool = False, record_trace: bool = True) -> EvasionResult:
    """Play the weight strategy from the all-cops-on-one-vertex opening.

    Cops start on ``start``; the robber starts on its neighbour ``first``
    (lowest-id neighbour by default) and moves first. ``max_rounds`` counts
    cop moves. With more cops than the ledger capacity the run is refused,
    except for t = h = 1 with at most delta - 1 cops, where the robber falls
    back to the neighbour-count argument (any neighbour with a cop-free
    closed neighbourhood).
    """
    t, h = params.t, params.h
    if not g.is_connected:
        raise PreconditionError("graph must be connected")
    if g.girth < params.girth_required:
        raise PreconditionError(f"girth {g.girth} < required {params.girth_required}")
    if n_cops < 0:
        raise InvalidInputError("cop count must be >= 0")
    mode = "weights"
    if n_cops > params.capacity:
        if t == 1 and h == 1 and n_cops <= g.min_degree - 1:
            mode = "neighbour-count"
        else:
            raise PreconditionError(f"{n_cops} cops exceed the ledger capacity {params.capacity}")
    if first is None:
        first = g.adj[start][0]
    if first not in g.adj[start]:
        raise InvalidInputError("robber must start next to the cops")

    audit = _Audit()
    cops = (start,) * n_cops
    v, y = first, start
    trace, rounds, state = [], 0, 0
    seen = set()
    survived, periodic = True, False
    weighted = mode == "weights"
    ledger = classify_cops(g, v, y, cops, params)
    while rounds < max_rounds:
        state += 1
        if stop_on_cycle:
            key = (cops, v, y)
            if key in seen:
                periodic = True
                break
            seen.add(key)
        if ledger.overlaps:
            audit.fail("class_overlap", state=state, count=ledger.overlaps)
        W = ledger.W
        if weighted and not W < params.ceiling:
            audit.fail("total_weight", state=state, W=str(W), ceiling=str(params.ceiling))
        j = ledger.argmin()
        target = ledger.targets[j]
        Wj = ledger.W_i[j]
        cop_set = set(cops)
        if h == 1:
            safe = not cop_set.intersection(g.closed_neighborhood(target))
            if not safe and mode == "neighbour-count":
                for u in g.adj[v]:
                    if not cop_set.intersection(g.closed_neighborhood(u)):
                        target, safe = u, True
                        break
        else:
            dv = g.distances(v)
            members = ledger.members(j)
            safe = all(dv[cops[c]] > 4 * h - 2 for c in members)
        if weighted and Wj < params.threshold and not safe:
            audit.fail("safety", state=state, v=v, target=target, W_j=str(Wj))
        path = g.geodesic(v, target)
        captured = False
        for x in path[1:]:
            if x in cops:
                captured = True
                break
            cops = validate_move(g, cops, adversary(cops, x))
            rounds += 1
            if x in cops:
                captured = True
                break
        if record_trace:
            trace.append(TraceRow(state, v, y, target, W, max(ledger.W_i), min(ledger.W_i), safe and not captured))
        if captured:
            audit.fail("capture", state=state, v=v, target=target)
            survived = False
            break
        v_new, y_new = target, path[-2]
        new = classify_cops(g, v_new, y_new, cops, params)
        if weighted:
            bound = params.r * Wj + n_cops
            if new.W > bound:
                audit.fail("contraction", state=state, W_new=str(new.W), bound=str(bound))
            for c, cls in enumerate(ledger.classes):
                if cls != j and new.weights[c] != 1:
                    audit.fail("purge", state=state, cop=c, weight=str(new.weights[c]))
        if h > 1:
            dn, dy = g.distances(v_new), g.distances(y_new)
            for c in cops:
                if dn[c] <= 2 * h - 2 and dy[c] + 1 != dn[c]:
                    audit.fail("state_invariant", state=state + 1, cop=c, dist=int(dn[c]))
        v, y, ledger = v_new, y_new, new

    return EvasionResult(params, n_cops, mode, survived, state, rounds, trace,
                         audit.counts, audit.examples, periodic, vacuous=n_cops == 0)


def simulate_evasion_degree(g: Graph, adversary, t: int, n_cops: int, **kw) -> EvasionResult:
    return simulate_evasion(g, adversary, params_for_graph(g, t, 1), n_cops, **kw)


def simulate_evasion_growth(g: Graph, adversary, t: int, h: int, n_cops: int, q: int | None = None,
                            **kw) -> EvasionResult:
    return simulate_evasion(g, adversary, params_for_graph(g, t, h, q), n_cops, **kw)
