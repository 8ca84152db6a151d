"""Graph factory: named high-girth fixtures, LPS Ramanujan graphs, random
regular graphs and edge subdivision."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InternalError, InvalidInputError, ResourceError
from .graph import Digraph, Graph

DEFAULT_MAX_LPS_VERTICES = 200_000


# --- elementary families ---------------------------------------------------

def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidInputError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def hypercube_graph(dim: int) -> Graph:
    n = 1 << dim
    return Graph(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(dim) if v < v ^ (1 << i)])


def directed_cycle(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def lcf_graph(n: int, shifts: list[int], repeats: int) -> Graph:
    edges = [(i, (i + 1) % n) for i in range(n)]
    seq = shifts * repeats
    edges += [(i, (i + seq[i]) % n) for i in range(n)]
    return Graph(n, edges)


def cyclic_lift(base_edges: list[tuple[int, int]], base_n: int, modulus: int, voltages: list[int]) -> Graph:
    """Z_m-lift: base edge (u, v) with voltage a joins (u, i) to (v, i + a)."""
    edges = [(u * modulus + i, v * modulus + (i + a) % modulus)
             for (u, v), a in zip(base_edges, voltages) for i in range(modulus)]
    return Graph(base_n * modulus, edges)


def random_tree(n: int, seed: int | None = None) -> Graph:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n <= 2:
        return path_graph(n)
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, n, size=n - 2).tolist()
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return Graph(n, edges)


def random_digraph(n: int, p: float, seed: int | None = None, allow_digons: bool = True) -> Digraph:
    rng = np.random.default_rng(seed)
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        a, b = rng.random(2) < p
        if a and b and not allow_digons:
            a, b = (True, False) if rng.random() < 0.5 else (False, True)
        if a:
            arcs.append((u, v))
        if b:
            arcs.append((v, u))
    return Digraph(n, arcs)


def random_orientation(g: Graph, seed: int | None = None) -> Digraph:
    rng = np.random.default_rng(seed)
    flips = rng.random(g.m) < 0.5
    return Digraph(g.n, [(v, u) if f else (u, v) for (u, v), f in zip(g.edges(), flips)])


# --- random regular and subdivision ---------------------------------------

def random_regular(n: int, d: int, seed: int | None = None, max_tries: int = 10_000) -> Graph:
    """Pairing model with rejection of loops and repeated pairs."""
    if (n * d) % 2:
        raise InvalidInputError("n*d must be even")
    if not 0 <= d < n:
        raise InvalidInputError("need 0 <= d < n")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(points).reshape(-1, 2)
        lo, hi = pairs.min(axis=1), pairs.max(axis=1)
        if np.any(lo == hi):
            continue
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            continue
        return Graph(n, zip(lo.tolist(), hi.tolist()))
    raise ResourceError(f"pairing model failed {max_tries} times for n={n}, d={d}",
                        required=None, budget=max_tries)


def subdivide(g: Graph, k: int) -> Graph:
    """Replace every edge by a path with k internal vertices."""
    if k < 0:
        raise InvalidInputError("k must be >= 0")
    edges = []
    nxt = g.n
    for u, v in g.edges():
        chain = [u, *range(nxt, nxt + k), v]
        nxt += k
        edges.extend(zip(chain, chain[1:]))
    return Graph(nxt, edges)


# --- finite fields and projective planes ----------------------------------

def is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    f = 3
    while f * f <= x:
        if x % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 and is_prime(p) else None
    return None


class GF:
    """Arithmetic in GF(p^k); elements are ints whose base-p digits are
    polynomial coefficients, reduced by the lexicographically first monic
    irreducible polynomial of degree k."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise InvalidInputError(f"{q} is not a prime power")
        self.q, (self.p, self.k) = q, pk
        self._mul = None
        if self.k > 1:
            self.modulus = self._irreducible()
            self._mul = [[self._polymul(a, b) for b in range(q)] for a in range(q)]

    def _digits(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _from_digits(self, ds):
        return sum(d * self.p ** i for i, d in enumerate(ds))

    def _irreducible(self):
        for tail in itertools.product(range(self.p), repeat=self.k):
            poly = list(tail) + [1]  # low to high, monic
            if tail[0] and self._no_factor(poly):
                return poly
        raise InternalError("no irreducible polynomial found")

    def _no_factor(self, poly):
        p, k = self.p, self.k
        for deg in range(1, k // 2 + 1):
            for tail in itertools.product(range(p), repeat=deg):
                div = list(tail) + [1]
                rem = poly[:]
                for i in range(len(rem) - 1, deg - 1, -1):
                    c = rem[i]
                    if c:
                        for j in range(deg + 1):
                            rem[i - deg + j] = (rem[i - deg + j] - c * div[j]) % p
                if not any(rem[:deg]):
                    return False
        return True

    def _polymul(self, a, b):
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k + 1):
                    prod[i - k + j] = (prod[i - k + j] - c * self.modulus[j]) % p
        return self._from_digits(prod[:k])

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a, b):
        return (a * b) % self.p if self.k == 1 else self._mul[a][b]


def pg_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q): 2(q^2+q+1) vertices, (q+1)-regular, girth 6."""
    F = GF(q)
    pts = [v for v in itertools.product(range(q), repeat=3)
           if any(v) and v[next(i for i in range(3) if v[i])] == 1]
    index = {p: i for i, p in enumerate(pts)}
    N = len(pts)
    edges = []
    for li, line in enumerate(pts):
        for pi, pt in enumerate(pts):
            s = 0
            for a, b in zip(line, pt):
                s = F.add(s, F.mul(a, b))
            if s == 0:
                edges.append((pi, N + li))
    assert len(index) == N
    return Graph(2 * N, edges)


# --- named fixtures --------------------------------------------------------

def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(10, outer + inner + spokes)


def hoffman_singleton_graph() -> Graph:
    edges = []
    for h in range(5):
        for j in range(5):
            edges.append((5 * h + j, 5 * h + (j + 1) % 5))
            edges.append((25 + 5 * h + j, 25 + 5 * h + (j + 2) % 5))
            for i in range(5):
                edges.append((5 * h + j, 25 + 5 * i + (h * i + j) % 5))
    return Graph(50, edges)


_K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
_K5 = list(itertools.combinations(range(5), 2))


@dataclass(frozen=True)
class Fixture:
    build: Callable[[], Graph]
    n: int
    degree: int
    girth: int
    note: str = ""


FIXTURES: dict[str, Fixture] = {
    "petersen": Fixture(petersen_graph, 10, 3, 5),
    "heawood": Fixture(lambda: lcf_graph(14, [5, -5], 7), 14, 3, 6),
    "mcgee": Fixture(lambda: lcf_graph(24, [12, 7, -7], 8), 24, 3, 7),
    "tutte_coxeter": Fixture(lambda: lcf_graph(30, [-13, -9, 7, -7, 9, 13], 5), 30, 3, 8),
    "hoffman_singleton": Fixture(hoffman_singleton_graph, 50, 7, 5),
    "girth9_cubic": Fixture(lambda: cyclic_lift(_K4, 4, 15, [0, 0, 0, 13, 4, 7]), 60, 3, 9,
                            "Z_15-lift of K_4; not the 58-vertex (3,9)-cage"),
    "girth9_quartic": Fixture(lambda: cyclic_lift(_K5, 5, 130, [0, 0, 0, 0, 19, 32, 124, 8, 57, 88]),
                              650, 4, 9, "Z_130-lift of K_5"),
}

CAGE_ALIASES = {(3, 5): "petersen", (3, 6): "heawood", (3, 7): "mcgee",
                (3, 8): "tutte_coxeter", (7, 5): "hoffman_singleton"}


def named_fixture(name: str) -> Graph:
    """Build a registry graph by name; also accepts ``cage(k,g)`` for the
    cages in :data:`CAGE_ALIASES` and ``pg_incidence(q)``."""
    key = name.strip().lower().replace("-", "_")
    m = re.fullmatch(r"pg_incidence\((\d+)\)", key)
    if m:
        return pg_incidence(int(m.group(1)))
    m = re.fullmatch(r"cage\((\d+),\s*(\d+)\)", key)
    if m:
        alias = CAGE_ALIASES.get((int(m.group(1)), int(m.group(2))))
        if alias is None:
            raise InvalidInputError(f"no registered fixture for {name}")
        key = alias
    fx = FIXTURES.get(key)
    if fx is None:
        raise InvalidInputError(f"unknown fixture {name!r}")
    return fx.build()


# --- LPS Ramanujan graphs --------------------------------------------------

def legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@dataclass(frozen=True)
class LpsParams:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        for name, x in (("p", p), ("q", q)):
            if not is_prime(x):
                raise InvalidInputError(f"{name}={x} is not prime")
            if x % 4 != 1:
                raise InvalidInputError(f"{name}={x} is not 1 mod 4")
        if p == q:
            raise InvalidInputError("p and q must differ")
        if q * q <= p:
            raise InvalidInputError(f"need q > sqrt(p); got q={q}, p={p}")
        if legendre(q, p) != -1:
            raise InvalidInputError(
                f"Legendre symbol (q|p) = +1: non-bipartite LPS branch is unsupported")

    @property
    def d(self) -> int:
        return self.p + 1

    @property
    def n(self) -> int:
        return self.q * (self.q ** 2 - 1)


def quaternion_generators(p: int) -> list[tuple[int, int, int, int]]:
    """Integer solutions of a^2+b^2+c^2+d^2 = p with a odd positive, b, c, d even."""
    bound = math.isqrt(p)
    sols = []
    for a in range(1, bound + 1, 2):
        for b, c, d in itertools.product(range(-bound, bound + 1), repeat=3):
            if b % 2 == 0 and c % 2 == 0 and d % 2 == 0 and a * a + b * b + c * c + d * d == p:
                sols.append((a, b, c, d))
    if len(sols) != p + 1:
        raise InternalError(f"expected {p + 1} quaternion solutions for p={p}, found {len(sols)}")
    return sols


def _normalize(m, q):
    for x in m:
        if x:
            inv = pow(x, -1, q)
            return tuple((y * inv) % q for y in m)
    raise InternalError("zero matrix")


def _pgl_elements(q: int) -> list[tuple[int, int, int, int]]:
    out = []
    for b, c, d in itertools.product(range(q), repeat=3):
        if (d - b * c) % q:
            out.append((1, b, c, d))
    for c, d in itertools.product(range(1, q), range(q)):
        out.append((0, 1, c, d))
    out.sort()
    return out


@dataclass
class LpsGraph:
    params: LpsParams
    graph: Graph
    generators: list[tuple[int, int, int, int]]
    provenance: dict = field(default_factory=dict)


def lps_graph(p: int, q: int, max_n: int = DEFAULT_MAX_LPS_VERTICES, verify: bool = True,
              spectral_tol: float = 1e-8) -> LpsGraph:
    """Cayley graph of PGL(2, q) on the p+1 LPS generators (bipartite branch).

    Vertices are PGL elements scaled so the first nonzero entry is 1, numbered
    in lexicographic order; edges join g to g*s.
    """
    params = LpsParams(p, q)
    if params.n > max_n:
        raise ResourceError(f"X^{{{p},{q}}} has {params.n} vertices > max {max_n}",
                            required=params.n, budget=max_n)
    i = next(x for x in range(q) if (x * x + 1) % q == 0)
    gens = []
    for a, b, c, d in quaternion_generators(p):
        gens.append(_normalize(((a + i * b) % q, (c + i * d) % q, (-c + i * d) % q, (a - i * b) % q), q))
    elems = _pgl_elements(q)
    index = {e: k for k, e in enumerate(elems)}
    edges = []
    for k, (x1, x2, x3, x4) in enumerate(elems):
        for y1, y2, y3, y4 in gens:
            prod = (x1 * y1 + x2 * y3, x1 * y2 + x2 * y4, x3 * y1 + x4 * y3, x3 * y2 + x4 * y4)
            j = index[_normalize(tuple(v % q for v in prod), q)]
            if k < j:
                edges.append((k, j))
    g = Graph(len(elems), edges)
    out = LpsGraph(params, g, gens)
    out.provenance = {
        "p": p, "q": q, "d": params.d, "n": g.n, "expected_n": params.n,
        "q_gt_sqrt_p": q * q > p, "legendre_q_p": -1,
        "girth_lower_bound": 4 * math.log(q) / math.log(p) - 1,
    }
    if verify:
        from .expansion import second_eigenvalue

        rep = second_eigenvalue(g, tol=spectral_tol)
        out.provenance.update({
            "regular": g.is_regular() and g.min_degree == params.d,
            "bipartite": g.bipartition is not None,
            "connected": g.is_connected,
            "girth": g.girth,
            "lambda2": rep.lambda2,
            "lambda2_residual": rep.residual,
            "ramanujan": rep.ramanujan,
        })
    return out
