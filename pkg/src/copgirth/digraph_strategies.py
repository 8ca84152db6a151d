"""Weight-ledger robber strategies on dispersed digraphs.

Cops are weighed by trap distance rather than plain distance. The out-degree
strategy takes one arc per state; the growth strategy walks h arcs per state,
choosing each arc on the fly while the weights stay frozen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .adversaries import validate_move
from .dispersion import enumerate_traps, is_t_dispersed
from .errors import InvalidInputError, PreconditionError
from .girth_strategies import EvasionResult, StrategyParams, TraceRow, _Audit
from .graph import INF, Digraph, digraph_growth_parameter, digraph_min_q


def rho_star(d: Digraph, v: int, c: int) -> float | int:
    """Trap distance from v to c via the sphere/ball formula (c != v)."""
    dv, dc = d.distances(v), d.distances(c)
    mask = (dv < INF) & (dc <= dv)
    return int(dv[mask].min()) if mask.any() else math.inf


def _arc_masks(d: Digraph, v: int, outs, L: int) -> list[np.ndarray]:
    """Per out-neighbour w: tips x at distance 1..L from v whose v-geodesic starts v -> w."""
    dv = d.distances(v)
    base = (dv >= 1) & (dv <= L)
    return [base & (d.distances(w) == dv - 1) for w in outs]


def _classes(d: Digraph, v: int, outs, L: int, cops) -> tuple[list[int | None], int]:
    """Class index per cop (first matching out-neighbour) and the overlap count."""
    dv = d.distances(v)
    masks = _arc_masks(d, v, outs, L)
    classes, overlaps = [], 0
    for c in cops:
        reach = d.distances(c) <= dv
        hit = [i for i, m in enumerate(masks) if (m & reach).any()]
        overlaps += len(hit) > 1
        classes.append(hit[0] if hit else None)
    return classes, overlaps


@dataclass(frozen=True)
class DigraphLedger:
    targets: tuple[int, ...]
    classes: list[int | None]
    rho: list
    weights: list[Fraction]
    W_i: list[Fraction]
    k: int
    overlaps: int

    @property
    def W(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def argmin(self) -> int:
        return min(range(len(self.W_i)), key=lambda i: (self.W_i[i], self.targets[i]))


def outdegree_targets(d: Digraph, v: int, y: int, q: int) -> tuple[int, ...]:
    outs = [u for u in d.out_adj[v] if u != y]
    if len(outs) < q:
        raise PreconditionError(f"vertex {v} has {len(outs)} out-neighbours besides {y}, need q={q}")
    return tuple(outs[:q])


def classify_cops_outdegree(d: Digraph, v: int, y: int, cops, params: StrategyParams) -> DigraphLedger:
    targets = outdegree_targets(d, v, y, params.q)
    classes, overlaps = _classes(d, v, targets, params.t, cops)
    rho, weights = [], []
    for c, cls in zip(cops, classes):
        p = rho_star(d, v, c) if c != v else 0
        rho.append(p)
        weights.append(Fraction(1) if cls is None else params.r ** (params.t - p))
    k = sum(cls is None for cls in classes)
    W_i = [Fraction(k, params.q) + sum((w for w, cls in zip(weights, classes) if cls == i), Fraction(0))
           for i in range(params.q)]
    return DigraphLedger(targets, classes, rho, weights, W_i, k, overlaps)


def digraph_params(d: Digraph, t: int, h: int = 1, q: int | None = None) -> StrategyParams:
    measured = digraph_min_q(d) if h == 1 else digraph_growth_parameter(d, h)
    if q is None:
        q = measured
    elif q > measured:
        raise PreconditionError(f"digraph has ({h},{measured})-growth, not ({h},{q})")
    return StrategyParams.make(t, q, h)


def _check_common(d: Digraph, params: StrategyParams, n_cops: int, certify: bool, allow_fallback: bool):
    if n_cops < 0:
        raise InvalidInputError("cop count must be >= 0")
    need = params.h * (params.t + 1) - 1
    if certify:
        cert = is_t_dispersed(d, need)
        if not cert.dispersed:
            raise PreconditionError(f"digraph is not {need}-dispersed")
    if n_cops > params.capacity:
        if allow_fallback and params.t == 1 and params.h == 1 and n_cops <= d.min_out_degree - 1:
            return "out-neighbour-count"
        raise PreconditionError(f"{n_cops} cops exceed the ledger capacity {params.capacity}")
    return "weights"


def _start(d: Digraph, start: int, first: int | None) -> int:
    if first is None:
        if not d.out_adj[start]:
            raise PreconditionError(f"vertex {start} has no out-neighbour")
        first = d.out_adj[start][0]
    if first not in d.out_adj[start]:
        raise InvalidInputError("robber must start on an out-neighbour of the cops' vertex")
    return first


def simulate_evasion_outdegree(d: Digraph, adversary, t: int, n_cops: int, *, q: int | None = None,
                               max_rounds: int = 1000, start: int = 0, first: int | None = None,
                               certify: bool = True, stop_on_cycle: bool = False,
                               record_trace: bool = True) -> EvasionResult:
    """One-arc-per-state weight strategy on a t-dispersed digraph."""
    params = digraph_params(d, t, 1, q)
    mode = _check_common(d, params, n_cops, certify, allow_fallback=True)
    weighted = mode == "weights"
    first = _start(d, start, first)
    audit = _Audit()
    cops = (start,) * n_cops
    v, y = first, start
    trace, seen = [], set()
    rounds = state = 0
    survived, periodic = True, False
    ledger = classify_cops_outdegree(d, v, y, cops, params)
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
        target, Wj = ledger.targets[j], ledger.W_i[j]
        cop_set = set(cops)
        safe = not cop_set.intersection(d.closed_in_neighborhood(target))
        if not safe and mode == "out-neighbour-count":
            for u in d.out_adj[v]:
                if not cop_set.intersection(d.closed_in_neighborhood(u)):
                    target, safe = u, True
                    break
        if weighted and Wj < params.threshold and not safe:
            audit.fail("safety", state=state, v=v, target=target, W_j=str(Wj))
        captured = target in cop_set
        if not captured:
            cops = validate_move(d, cops, adversary(cops, target))
            rounds += 1
            captured = target in cops
        if record_trace:
            trace.append(TraceRow(state, v, y, target, W, max(ledger.W_i), min(ledger.W_i), safe and not captured))
        if captured:
            audit.fail("capture", state=state, v=v, target=target)
            survived = False
            break
        new = classify_cops_outdegree(d, target, v, cops, params)
        if weighted:
            bound = params.r * Wj + n_cops
            if new.W > bound:
                audit.fail("contraction", state=state, W_new=str(new.W), bound=str(bound))
            for c, cls in enumerate(ledger.classes):
                if cls != j and new.weights[c] != 1:
                    audit.fail("purge", state=state, cop=c, weight=str(new.weights[c]))
        v, y, ledger = target, v, new
    return EvasionResult(params, n_cops, mode, survived, state, rounds, trace,
                         audit.counts, audit.examples, periodic, vacuous=n_cops == 0)


def growth_targets(d: Digraph, v: int, y: int, params: StrategyParams) -> tuple[int, ...]:
    dv, dy = d.distances(v), d.distances(y)
    pool = np.flatnonzero((dv == params.h) & (dy >= params.h)).tolist()
    if len(pool) < params.q:
        raise PreconditionError(f"vertex {v} has {len(pool)} growth targets away from {y}, need q={params.q}")
    return tuple(pool[:params.q])


def rho_away(d: Digraph, v: int, back: int, c: int) -> float | int:
    """Trap distance from v to c over traps whose first arc is not v -> back.

    Only differs from ``rho_star`` when v -> back closes a digon: the cop
    trailing the robber then has a length-1 trap through the vertex the
    robber just left, which the strategy never steps back into.
    """
    if c == v:
        return 0
    dv, dc = d.distances(v), d.distances(c)
    away = np.zeros(d.n, dtype=bool)
    for w in d.out_adj[v]:
        if w != back:
            away |= d.distances(w) == dv - 1
    mask = away & (dv >= 1) & (dc <= dv)
    return int(dv[mask].min()) if mask.any() else math.inf


def _state_weights(d: Digraph, v: int, y: int, cops, params: StrategyParams):
    targets = growth_targets(d, v, y, params)
    h = params.h
    outs = [w for w in d.out_adj[v] if any(d.distances(w)[u] == h - 1 for u in targets)]
    cls, overlaps = _classes(d, v, outs, h * (params.t + 1) - 1, cops)
    rho = [rho_away(d, v, y, c) for c in cops]
    weights = [Fraction(1) if cl is None else _growth_weight(params, p) for cl, p in zip(cls, rho)]
    return targets, cls, overlaps, rho, weights


def _growth_weight(params: StrategyParams, rho) -> Fraction:
    if params.t == 1:
        return Fraction(1)
    return params.r ** (params.t + 1 - math.ceil(Fraction(rho + 1, params.h)))


def simulate_evasion_digraph_growth(d: Digraph, adversary, t: int, h: int, n_cops: int, *,
                                    q: int | None = None, max_rounds: int = 1000, start: int = 0,
                                    first: int | None = None, certify: bool = True,
                                    stop_on_cycle: bool = False, record_trace: bool = True) -> EvasionResult:
    """h-arc-per-state strategy on an (h(t+1)-1)-dispersed digraph with (h,q)-growth.

    Weights are fixed when a state begins; each step moves to the out-neighbour
    w minimizing W_w / d_w, where d_w counts the remaining targets whose
    geodesic leaves through w.
    """
    params = digraph_params(d, t, h, q)
    mode = _check_common(d, params, n_cops, certify, allow_fallback=False)
    first = _start(d, start, first)
    L0 = h * (t + 1)
    audit = _Audit()
    extra = {"average": 0, "threat_set": 0, "dangerous_weight": 0, "promotion": 0}
    counts = audit.counts
    counts.update(extra)
    cops = (start,) * n_cops
    v, y = first, start
    trace, seen = [], set()
    rounds = state = 0
    survived, periodic = True, False
    while rounds < max_rounds:
        state += 1
        if stop_on_cycle:
            key = (cops, v, y)
            if key in seen:
                periodic = True
                break
            seen.add(key)
        targets, cls1, overlaps, rho, weights = _state_weights(d, v, y, cops, params)
        # state invariant: short traps to any cop run through y
        for c, p in zip(cops, rho):
            if c != y and rho_star(d, v, c) <= h - 1:
                if any(y not in T.vertices for T in enumerate_traps(d, v, c, h - 1)):
                    audit.fail("state_invariant", state=state, cop=c)
        if overlaps:
            audit.fail("class_overlap", state=state, count=overlaps)
        W = sum(weights, Fraction(0))
        Z = sum((w for w, cl in zip(weights, cls1) if cl is not None), Fraction(0)) / params.q
        if not W < params.ceiling:
            audit.fail("total_weight", state=state, W=str(W), ceiling=str(params.ceiling))
        cur, prev = v, y
        remaining = list(targets)
        dset = set(range(len(cops)))
        prev_choice: set[int] | None = None
        captured = False
        row_w = []
        for i in range(1, h + 1):
            L = L0 - i
            remaining = [u for u in remaining if d.distances(cur)[u] == h - i + 1]
            outs = [w for w in d.out_adj[cur] if any(d.distances(w)[u] == h - i for u in remaining)]
            mult = [sum(d.distances(w)[u] == h - i for u in remaining) for w in outs]
            cls, _ = _classes(d, cur, outs, L, cops)
            threatening = {c for c in range(len(cops)) if cops[c] != cur and rho_away(d, cur, prev, cops[c]) <= L}
            if prev_choice is not None and not threatening <= prev_choice:
                audit.fail("threat_set", state=state, step=i, extra=sorted(threatening - prev_choice))
            dset &= threatening
            Wl = [sum((weights[c] for c in range(len(cops)) if cls[c] == l), Fraction(0)) for l in range(len(outs))]
            jj = min(range(len(outs)), key=lambda l: (Wl[l] / mult[l], outs[l]))
            row_w.append(Wl[jj] / mult[jj])
            if Wl[jj] / mult[jj] > Z:
                audit.fail("average", state=state, step=i, value=str(Wl[jj] / mult[jj]), Z=str(Z))
            prev_choice = {c for c in range(len(cops)) if cls[c] == jj}
            dset &= prev_choice
            nxt = outs[jj]
            if nxt in cops:
                captured = True
                break
            cops = validate_move(d, cops, adversary(cops, nxt))
            rounds += 1
            prev, cur = cur, nxt
            if cur in cops:
                captured = True
                break
        if record_trace:
            trace.append(TraceRow(state, v, y, cur, W, max(row_w, default=Z), min(row_w, default=Z), not captured))
        if captured:
            audit.fail("capture", state=state, v=v, target=cur)
            survived = False
            break
        dweight = sum((weights[c] for c in dset), Fraction(0))
        if dweight > Z:
            audit.fail("dangerous_weight", state=state, weight=str(dweight), Z=str(Z))
        if Z < params.threshold and any(rho[c] < 2 * h for c in dset):
            audit.fail("safety", state=state, Z=str(Z))
        # next state's weights against the bookkeeping of this one
        v_new, y_new = cur, prev
        _, _, _, _, new_w = _state_weights(d, v_new, y_new, cops, params)
        W_new = sum(new_w, Fraction(0))
        if W_new > params.r * Z + n_cops:
            audit.fail("contraction", state=state, W_new=str(W_new), bound=str(params.r * Z + n_cops))
        for c in range(len(cops)):
            if c not in dset and new_w[c] != 1:
                audit.fail("purge", state=state, cop=c, weight=str(new_w[c]))
            if t >= 2 and c in dset and new_w[c] > params.r * weights[c]:
                audit.fail("promotion", state=state, cop=c, old=str(weights[c]), new=str(new_w[c]))
        v, y = v_new, y_new
    return EvasionResult(params, n_cops, mode, survived, state, rounds, trace,
                         audit.counts, audit.examples, periodic, vacuous=n_cops == 0)
