"""Traps, trap distance and t-dispersion certificates for digraphs.

A (v,u)-trap is a pair of geodesics P: v -> x (at least one arc) and
Q: u -> x with |Q| <= |P| meeting only at the tip x (and at v when u = v, in
which case both need two arcs). Its length is |P|.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import InvalidInputError, ResourceError
from .graph import INF, Digraph

DEFAULT_TRAP_BUDGET = 2_000_000


def trap_budget() -> int:
    return int(os.environ.get("COPGIRTH_TRAP_BUDGET", DEFAULT_TRAP_BUDGET))


@dataclass(frozen=True)
class Trap:
    v: int
    u: int
    P: tuple[int, ...]
    Q: tuple[int, ...]

    @property
    def tip(self) -> int:
        return self.P[-1]

    @property
    def length(self) -> int:
        return len(self.P) - 1

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.P) | frozenset(self.Q)

    @property
    def first_step(self) -> int:
        return self.P[1]

    def as_dict(self) -> dict:
        return {"v": self.v, "u": self.u, "tip": self.tip, "length": self.length,
                "P": list(self.P), "Q": list(self.Q)}


def _check_vertex(d: Digraph, *vs):
    for v in vs:
        if not 0 <= v < d.n:
            raise InvalidInputError(f"vertex {v} out of range")


def geodesics_between(d: Digraph, a: int, b: int, to_b: np.ndarray | None = None,
                      limit: int | None = None) -> list[tuple[int, ...]]:
    """All shortest directed a -> b paths. ``to_b`` are distances to b."""
    to_b = d.reverse_distances(b) if to_b is None else to_b
    if to_b[a] >= INF:
        return []
    out: list[tuple[int, ...]] = []

    def walk(path):
        x = path[-1]
        if x == b:
            out.append(tuple(path))
            if limit is not None and len(out) > limit:
                raise ResourceError(f"more than {limit} geodesics from {a} to {b}", required=len(out), budget=limit)
            return
        for w in d.out_adj[x]:
            if to_b[w] == to_b[x] - 1:
                path.append(w)
                walk(path)
                path.pop()

    walk([a])
    return out


def is_trap(d: Digraph, trap: Trap) -> bool:
    """Re-validate a trap against the digraph."""
    P, Q = trap.P, trap.Q
    if not P or not Q or P[0] != trap.v or Q[0] != trap.u or P[-1] != Q[-1]:
        return False
    for path in (P, Q):
        if any(not d.has_arc(a, b) for a, b in zip(path, path[1:])):
            return False
        if d.dist(path[0], path[-1]) != len(path) - 1:
            return False
    if len(P) < 2 or len(Q) > len(P):
        return False
    shared = set(P) & set(Q)
    if trap.u == trap.v:
        return len(P) >= 3 and len(Q) >= 3 and shared == {trap.v, trap.tip}
    return shared == {trap.tip}


class _TrapIndex:
    """Enumerates traps from a fixed source v, caching geodesic lists."""

    def __init__(self, d: Digraph, budget: int):
        self.d = d
        self.budget = budget
        self.count = 0
        self._into: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def paths(self, a: int, x: int) -> list[tuple[int, ...]]:
        key = (a, x)
        got = self._into.get(key)
        if got is None:
            got = geodesics_between(self.d, a, x, self.d.reverse_distances(x), limit=self.budget)
            self._into[key] = got
        return got

    def traps(self, v: int, max_len: int, u: int | None = None) -> Iterator[Trap]:
        d = self.d
        dv = d.distances(v)
        du = None if u is None else d.distances(u)
        tips = np.flatnonzero((dv >= 1) & (dv <= max_len))
        for x in tips.tolist():
            rho = int(dv[x])
            if du is not None:
                if du[x] > rho:
                    continue
                starts = [u]
            else:
                to_x = d.reverse_distances(x)
                starts = np.flatnonzero(to_x <= rho).tolist()
            Ps = self.paths(v, x)
            for w in starts:
                if w == v and rho < 2:
                    continue
                for Q in self.paths(w, x):
                    for P in Ps:
                        shared = set(P).intersection(Q)
                        if w == v:
                            ok = shared == {v, x} and len(Q) == len(P)
                        else:
                            ok = shared == {x}
                        if ok:
                            self.count += 1
                            if self.count > self.budget:
                                raise ResourceError(f"trap enumeration from {v} exceeded {self.budget} traps",
                                                    required=self.count, budget=self.budget)
                            yield Trap(v, w, P, Q)


def enumerate_traps(d: Digraph, v: int, u: int, max_len: int, budget: int | None = None) -> list[Trap]:
    """All (v,u)-traps of length at most ``max_len`` by exhaustive geodesic-pair search."""
    _check_vertex(d, v, u)
    if max_len < 0:
        raise InvalidInputError("max_len must be >= 0")
    index = _TrapIndex(d, trap_budget() if budget is None else budget)
    return sorted(index.traps(v, max_len, u), key=lambda T: (T.length, T.P, T.Q))


def trap_distance(d: Digraph, v: int, u: int) -> float | int:
    """Least rho with S_rho(v) meeting B_rho(u): the minimum (v,u)-trap length.

    For u == v the definition asks for two internally disjoint geodesics of
    equal length >= 2 to a common tip, found here by enumeration.
    """
    _check_vertex(d, v, u)
    if u == v:
        traps = enumerate_traps(d, v, v, d.n)
        return traps[0].length if traps else math.inf
    dv, du = d.distances(v), d.distances(u)
    mask = (dv < INF) & (du <= dv)
    return int(dv[mask].min()) if mask.any() else math.inf


def trap_distance_matrix(d: Digraph) -> np.ndarray:
    """R[v, u] = trap distance for v != u (INF when none); diagonal left INF."""
    n = d.n
    D = np.stack([d.distances(v) for v in range(n)])
    R = np.full((n, n), INF, dtype=np.int64)
    for v in range(n):
        dv = D[v]
        ok = (D <= dv[None, :]) & (dv[None, :] < INF)
        vals = np.where(ok, dv[None, :], INF)
        R[v] = vals.min(axis=1)
        R[v, v] = INF
    return R


# --- certification ------------------------------------------------------------

def _disjoint(a: Trap, b: Trap) -> bool:
    return a != b and (a.vertices & b.vertices) <= {a.v, a.u}


def _digon_trap(d: Digraph, trap: Trap) -> bool:
    return trap.length == 1 and trap.tip == trap.u and d.has_arc(trap.u, trap.v)


@dataclass
class DispersionCertificate:
    t: int
    dispersed: bool
    digon_exception: bool
    witness: dict | None = None
    traps_examined: int = 0

    def as_dict(self) -> dict:
        return {"t": self.t, "verdict": "dispersed" if self.dispersed else "violated",
                "digon_exception": self.digon_exception, "traps_examined": self.traps_examined,
                "witness": self.witness}


def _traps_by_target(index: _TrapIndex, v: int, t: int) -> dict[int, list[Trap]]:
    out: dict[int, list[Trap]] = {}
    for T in index.traps(v, t):
        if T.u != v:
            out.setdefault(T.u, []).append(T)
    return out


def is_t_dispersed(d: Digraph, t: int, digon_exception: bool = True, budget: int | None = None) -> DispersionCertificate:
    """Check both dispersion conditions, returning the first witness found."""
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    index = _TrapIndex(d, trap_budget() if budget is None else budget)
    for v in range(d.n):
        by_u = _traps_by_target(index, v, t)
        for u in sorted(by_u):
            traps = by_u[u]
            # condition (2): an arc u -> v forbids every (v,u)-trap of length <= t
            if d.has_arc(u, v):
                bad = [T for T in traps if not (digon_exception and _digon_trap(d, T))]
                if bad:
                    return DispersionCertificate(t, False, digon_exception,
                                                 {"condition": 2, "arc": [u, v], "traps": [bad[0].as_dict()]},
                                                 index.count)
            # condition (1): no two internally disjoint (v,u)-traps
            for i, a in enumerate(traps):
                for b in traps[i + 1:]:
                    if _disjoint(a, b):
                        return DispersionCertificate(t, False, digon_exception,
                                                     {"condition": 1, "v": v, "u": u,
                                                      "traps": [a.as_dict(), b.as_dict()]},
                                                     index.count)
    return DispersionCertificate(t, True, digon_exception, None, index.count)


def validate_witness(d: Digraph, cert: DispersionCertificate) -> bool:
    """Re-check a violation witness from scratch."""
    if cert.dispersed or cert.witness is None:
        return False
    w = cert.witness
    traps = [Trap(T["v"], T["u"], tuple(T["P"]), tuple(T["Q"])) for T in w["traps"]]
    if not all(is_trap(d, T) and T.length <= cert.t for T in traps):
        return False
    if w["condition"] == 2:
        u, v = w["arc"]
        T = traps[0]
        return d.has_arc(u, v) and (T.v, T.u) == (v, u) and not (cert.digon_exception and _digon_trap(d, T))
    a, b = traps
    return a.v == b.v and a.u == b.u and a.v != a.u and _disjoint(a, b)


# --- lemma checks -----------------------------------------------------------

@dataclass
class LemmaReport:
    name: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def as_dict(self) -> dict:
        return {"lemma": self.name, "checked": self.checked, "holds": self.holds,
                "counterexamples": self.counterexamples[:20]}


def _geodesic_counts(d: Digraph, v: int, dv: np.ndarray) -> np.ndarray:
    count = np.zeros(d.n, dtype=object)
    count[v] = 1
    order = sorted((int(dv[x]), x) for x in range(d.n) if dv[x] < INF)
    for _, x in order:
        if x == v:
            continue
        count[x] = sum(count[y] for y in d.in_adj[x] if dv[y] == dv[x] - 1)
    return count


def check_lemma_unique_geodesic(d: Digraph, t: int, digon_exception: bool = True) -> LemmaReport:
    """For dist(v,x) <= t: one (v,x)-geodesic, and dist(u,x) > dist(v,x) for every arc u -> v.

    Under the digon exception, when u <-> v is a digon, tips x whose
    (v,x)-geodesic runs through u are skipped: the trap they induce reduces
    to the excluded digon trap.
    """
    rep = LemmaReport("unique_geodesic")
    for v in range(d.n):
        dv = d.distances(v)
        counts = _geodesic_counts(d, v, dv)
        near = np.flatnonzero(dv <= t).tolist()
        for x in near:
            rep.checked += 1
            if counts[x] != 1:
                rep.counterexamples.append({"claim": "unique", "v": v, "x": x, "geodesics": int(counts[x])})
        for u in d.in_adj[v]:
            du = d.distances(u)
            for x in near:
                if digon_exception and d.has_arc(v, u) and du[x] + 1 == dv[x]:
                    continue
                rep.checked += 1
                if du[x] <= dv[x]:
                    rep.counterexamples.append({"claim": "in-neighbour farther", "v": v, "u": u, "x": x})
    return rep


def check_lemma_same_outneighbor(d: Digraph, t: int, budget: int | None = None) -> LemmaReport:
    """All (v,u)-traps of length <= t (u != v) start with the same arc out of v."""
    rep = LemmaReport("same_outneighbor")
    index = _TrapIndex(d, trap_budget() if budget is None else budget)
    for v in range(d.n):
        for u, traps in sorted(_traps_by_target(index, v, t).items()):
            rep.checked += 1
            firsts = sorted({T.first_step for T in traps})
            if len(firsts) > 1:
                rep.counterexamples.append({"v": v, "u": u, "first_steps": firsts})
    return rep


def check_lemma_rho_decrease(d: Digraph, t: int, R: np.ndarray | None = None) -> LemmaReport:
    """rho*(v,u) <= rho*(v',u') + 1 for out-neighbours v', u' whenever rho*(v',u') <= t."""
    rep = LemmaReport("rho_decrease")
    R = trap_distance_matrix(d) if R is None else R
    for v in range(d.n):
        outs_v = list(d.out_adj[v])
        if not outs_v:
            continue
        for u in range(d.n):
            if u == v or not d.out_adj[u]:
                continue
            sub = R[np.ix_(outs_v, list(d.out_adj[u]))]
            sub = np.where(sub <= t, sub, INF)
            rep.checked += 1
            m = int(sub.min())
            if m < INF and R[v, u] > m + 1:
                rep.counterexamples.append({"v": v, "u": u, "rho": int(R[v, u]), "rho_next": m})
    return rep


def brute_force_min_trap(d: Digraph, v: int, u: int) -> float | int:
    """Minimum trap length by enumeration (independent of the sphere/ball formula)."""
    traps = enumerate_traps(d, v, u, d.n)
    return traps[0].length if traps else math.inf
