"""Vertex/edge expansion and the spectral toolkit for regular graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .errors import InvalidInputError, NumericalError, PreconditionError, ResourceError
from .graph import INF, Graph, _bfs

BRUTE_FORCE_MAX_N = 24
EXHAUSTIVE_BALL_MAX_N = 18


def size_cap(n: int, gamma: float) -> int:
    """Largest integer s with s <= n^(1-gamma)."""
    if not 0 < gamma < 1:
        raise InvalidInputError("gamma must lie in (0, 1)")
    return int(math.floor(n ** (1 - gamma) + 1e-9))


# --- subset enumeration ------------------------------------------------------

def _neighbor_masks(g: Graph) -> np.ndarray:
    return np.array([sum(1 << u for u in g.adj[v]) for v in range(g.n)], dtype=np.uint32)


def _all_subset_unions(values: np.ndarray, n: int) -> np.ndarray:
    """out[mask] = OR of values[i] over the bits i of mask."""
    out = np.zeros(1 << n, dtype=np.uint32)
    for i in range(n):
        lo = 1 << i
        out[lo:2 * lo] = out[:lo] | values[i]
    return out


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _check_brute_size(g: Graph, cap: int = BRUTE_FORCE_MAX_N):
    if g.n > cap:
        raise ResourceError(f"subset enumeration limited to n <= {cap}, got n={g.n}",
                            required=g.n, budget=cap)
    if g.n < 1:
        raise InvalidInputError("empty graph")


def h_gamma_bruteforce(g: Graph, gamma: float) -> Fraction:
    """min |boundary(S)|/|S| over nonempty S with |S| <= n^(1-gamma), where the
    boundary is the set of outside vertices with a neighbour in S."""
    _check_brute_size(g)
    n = g.n
    cap = size_cap(n, gamma)
    if cap < 1:
        raise InvalidInputError(f"no admissible sets: n^(1-gamma) < 1")
    masks = np.arange(1 << n, dtype=np.uint32)
    nbr = _all_subset_unions(_neighbor_masks(g), n)
    boundary = _popcount(nbr & ~masks)
    sizes = _popcount(masks)
    best = None
    for s in range(1, min(cap, n) + 1):
        b = int(boundary[sizes == s].min())
        val = Fraction(b, s)
        if best is None or val < best:
            best = val
    return best


def isoperimetric_number(g: Graph) -> Fraction:
    """min |edge boundary(S)|/|S| over nonempty S with |S| <= n/2."""
    _check_brute_size(g)
    n = g.n
    if n < 2:
        raise InvalidInputError("isoperimetric number needs n >= 2")
    nb = _neighbor_masks(g)
    inner = np.zeros(1 << n, dtype=np.int64)
    degsum = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        lo = 1 << i
        low = np.arange(lo, dtype=np.uint32)
        inner[lo:2 * lo] = inner[:lo] + _popcount(low & nb[i])
        degsum[lo:2 * lo] = degsum[:lo] + g.degree(i)
    cut = degsum - 2 * inner
    sizes = _popcount(np.arange(1 << n, dtype=np.uint32))
    best = None
    for s in range(1, n // 2 + 1):
        val = Fraction(int(cut[sizes == s].min()), s)
        if best is None or val < best:
            best = val
    return best


def vertex_boundary(g: Graph, S) -> set[int]:
    S = set(S)
    return {u for v in S for u in g.adj[v]} - S


def edge_boundary(g: Graph, S) -> int:
    S = set(S)
    return sum(1 for v in S for u in g.adj[v] if u not in S)


# --- ball growth ---------------------------------------------------------------

@dataclass
class BallGrowthReport:
    gamma: float
    epsilon: float
    r: int
    sets_checked: int
    exhaustive: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _growth_floor(n, gamma, eps, size, r):
    return min(n ** (1 - gamma), size * (1 + eps) ** r)


def check_ball_growth(g: Graph, gamma: float, eps: float, r: int, *, exhaustive: bool | None = None,
                      n_random: int = 200, seed: int = 0, sets=None, atol: float = 1e-9) -> BallGrowthReport:
    """Test |B_r'(S)| >= min(n^(1-gamma), |S|(1+eps)^r') for every r' <= r.

    Exhaustive over all nonempty S when n <= 18 (or when forced); otherwise
    over singletons, edges, ``n_random`` random sets and any explicit ``sets``.
    """
    n = g.n
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_BALL_MAX_N and sets is None
    rep = BallGrowthReport(gamma, float(eps), r, 0, exhaustive)
    if exhaustive:
        _check_brute_size(g, EXHAUSTIVE_BALL_MAX_N)
        masks = np.arange(1, 1 << n, dtype=np.uint32)
        nbr = _all_subset_unions(_neighbor_masks(g), n)
        closed = nbr | np.arange(1 << n, dtype=np.uint32)
        sizes = _popcount(masks).astype(float)
        cur = masks
        for rr in range(r + 1):
            if rr:
                cur = closed[cur]
            bound = np.minimum(n ** (1 - gamma), sizes * (1 + eps) ** rr)
            bad = np.flatnonzero(_popcount(cur) < bound - atol)
            for i in bad[:20]:
                S = [v for v in range(n) if masks[i] >> v & 1]
                rep.violations.append({"S": S, "r": rr, "ball": int(_popcount(cur[i:i + 1])[0]),
                                       "bound": float(bound[i])})
        rep.sets_checked = len(masks)
        return rep

    rng = np.random.default_rng(seed)
    family = [[v] for v in range(n)] + [list(e) for e in g.edges()]
    cap = max(2, size_cap(n, gamma))
    for _ in range(n_random):
        k = int(rng.integers(2, cap + 1))
        family.append(sorted(rng.choice(n, size=min(k, n), replace=False).tolist()))
    if sets is not None:
        family.extend(list(s) for s in sets)
    for S in family:
        d = _bfs(g.adj, S, n, cutoff=r)
        for rr in range(r + 1):
            size = int(np.count_nonzero(d <= rr))
            bound = _growth_floor(n, gamma, eps, len(set(S)), rr)
            if size < bound - atol:
                rep.violations.append({"S": S, "r": rr, "ball": size, "bound": bound})
    rep.sets_checked = len(family)
    return rep


# --- spectra ---------------------------------------------------------------------

@dataclass
class SpectralReport:
    n: int
    d: int
    lambda2: float
    residual: float
    lambda_min: float
    residual_min: float
    bipartite: bool
    iterations: int

    @property
    def alpha(self) -> float:
        return self.lambda2 ** 2 / self.d

    @property
    def ramanujan(self) -> bool:
        worst = max(abs(self.lambda2) - self.residual, abs(self.lambda_min) - self.residual_min)
        return worst <= 2 * math.sqrt(self.d - 1)

    @property
    def lambda2_upper(self) -> float:
        return self.lambda2 + self.residual

    @property
    def symmetric(self) -> bool:
        """Nontrivial spectrum symmetric about 0 (expected for bipartite graphs)."""
        return abs(self.lambda2 + self.lambda_min) <= 10 * max(self.residual + self.residual_min, 1e-12)

    def as_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "lambda2": self.lambda2, "residual": self.residual,
                "lambda_min_nontrivial": self.lambda_min, "bipartite": self.bipartite,
                "alpha": self.alpha, "ramanujan": self.ramanujan, "iterations": self.iterations}


def adjacency_matrix(g: Graph) -> sp.csr_matrix:
    rows = np.repeat(np.arange(g.n), [len(a) for a in g.adj])
    cols = np.fromiter((u for a in g.adj for u in a), dtype=np.int64, count=len(rows))
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))


def _deflated_power(M, shift, basis, n, tol, max_iter, rng, A):
    """Dominant eigenpair of A + shift*I on the complement of ``basis``.

    Returns (theta, residual, iterations) where theta is the Rayleigh quotient
    of A and residual = ||A x - theta x|| for the unit iterate x.
    """
    x = rng.standard_normal(n)
    for b in basis:
        x -= (b @ x) * b
    x /= np.linalg.norm(x)
    theta, res = 0.0, math.inf
    for it in range(1, max_iter + 1):
        y = M @ x + shift * x
        for b in basis:
            y -= (b @ y) * b
        norm = np.linalg.norm(y)
        if norm == 0.0:
            # x lies in a zero eigenspace of the shifted operator
            ax = A @ x
            theta = float(x @ ax)
            return theta, float(np.linalg.norm(ax - theta * x)), it
        x = y / norm
        if it % 10 == 0 or it == max_iter:
            ax = A @ x
            theta = float(x @ ax)
            res = float(np.linalg.norm(ax - theta * x))
            if res <= tol:
                return theta, res, it
    raise NumericalError(f"power iteration did not converge in {max_iter} steps", residual=res)


def second_eigenvalue(g: Graph, tol: float = 1e-8, max_iter: int = 200_000, seed: int = 0) -> SpectralReport:
    """Second-largest adjacency eigenvalue of a connected regular graph.

    Power iteration on A + dI with the all-ones vector (and the bipartition
    sign vector, when bipartite) projected out. A second run on dI - A gives
    the most negative nontrivial eigenvalue.
    """
    if not g.is_connected:
        raise PreconditionError("second_eigenvalue needs a connected graph")
    if not g.is_regular():
        raise PreconditionError("second_eigenvalue needs a regular graph")
    n, d = g.n, g.min_degree
    if n < 3:
        raise PreconditionError("need n >= 3 for a nontrivial second eigenvalue")
    A = adjacency_matrix(g)
    basis = [np.full(n, 1 / math.sqrt(n))]
    side = g.bipartition
    if side is not None:
        s = np.where(np.array(side) == 0, 1.0, -1.0)
        basis.append(s / math.sqrt(n))
    rng = np.random.default_rng(seed)
    lam2, res2, it2 = _deflated_power(A, float(d), basis, n, tol, max_iter, rng, A)
    lam_min, res_min, it3 = _deflated_power(-A, float(d), basis, n, tol, max_iter, rng, A)
    return SpectralReport(n, d, lam2, res2, lam_min, res_min, side is not None, it2 + it3)


# --- Tanner bound and the spectral h_gamma profile ---------------------------

def tanner_bound(d: int, lam, n: int, s: int) -> Fraction:
    """d^2 s / (lam + 2 (d^2 - lam) s / n): guaranteed neighbour count of any
    s-subset of one side of a d-regular bipartite graph on n vertices whose
    biadjacency Gram matrix has second eigenvalue at most lam."""
    lam = Fraction(lam)
    if d < 1:
        raise InvalidInputError("d must be >= 1")
    if lam <= 0:
        raise InvalidInputError("lambda must be positive")
    if lam > d * d:
        raise InvalidInputError("lambda must not exceed d^2")
    if not 1 <= s <= Fraction(n, 2):
        raise InvalidInputError("set size must lie in [1, n/2]")
    return Fraction(d * d * s) / (lam + 2 * (d * d - lam) * Fraction(s, n))


@dataclass
class HGammaBound:
    gamma: float
    limit: float
    lps_form: float
    certified_epsilon: Fraction | None
    profile: list[tuple[int, float]]
    saturated: bool = False

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "hgamma_limit": self.limit, "hgamma_d_over_4_minus_1": self.lps_form,
                "hgamma_certified": None if self.certified_epsilon is None else float(self.certified_epsilon),
                "hgamma_certified_profile": [[s, b] for s, b in self.profile], "saturated": self.saturated}


def spectral_hgamma_bound(rep: SpectralReport, gamma: float = 0.5, profile_points: int = 8) -> HGammaBound:
    """Finite-n lower bound on h_gamma from the Tanner inequality.

    For |S| = a + b with a = |S cap X|, b = |S cap Y|, the outer boundary has
    at least f(a) + f(b) - |S| vertices, with f evaluated at the certified
    upper bound (lambda2 + residual)^2. The asymptotic figure
    (d/lambda2)^2 - 1 is reported alongside as ``limit``.
    """
    if not rep.bipartite:
        raise PreconditionError("spectral h_gamma bound needs a bipartite graph")
    d, n = rep.d, rep.n
    limit = math.inf if rep.lambda2 <= 0 else (d / rep.lambda2) ** 2 - 1
    lps_form = d / 4 - 1
    lam_up = min(Fraction(max(rep.lambda2_upper, 0.0)) ** 2, Fraction(d * d))
    cap = min(size_cap(n, gamma), n)
    if lam_up == 0:
        # complete bipartite: every set sees the whole opposite side
        return HGammaBound(gamma, limit, lps_form, None, [], saturated=True)
    half = n // 2

    def f(a):
        return Fraction(0) if a == 0 else tanner_bound(d, lam_up, n, a)

    def bound(s):
        lo, hi = max(0, s - half), min(s, half)
        # f is concave with f(0) = 0, so the split minimum sits at an end
        worst = min(f(lo) + f(s - lo), f(hi) + f(s - hi))
        return worst / s - 1

    best = None
    for s in range(1, cap + 1):
        b = bound(s)
        if best is None or b < best:
            best = b
    marks = sorted({1, cap, *np.unique(np.geomspace(1, max(cap, 1), profile_points).astype(int)).tolist()})
    profile = [(s, float(bound(s))) for s in marks if 1 <= s <= cap]
    return HGammaBound(gamma, limit, lps_form, best, profile)


def weak_meyniel_exponent(max_degree: int, eps: float) -> tuple[float, float]:
    """(corollary exponent 1 - log_{D-1}(1 + eps/D)/2, theorem exponent 1 - log_{D-1}(1 + eps)/2)."""
    if max_degree < 3:
        raise InvalidInputError("maximum degree must be >= 3")
    if not 0 < eps <= max_degree - 2:
        raise InvalidInputError(f"need 0 < eps <= {max_degree - 2}")
    base = math.log(max_degree - 1)
    return (1 - 0.5 * math.log1p(eps / max_degree) / base,
            1 - 0.5 * math.log1p(eps) / base)
