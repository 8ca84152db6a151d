"""Immutable graphs and digraphs with cached BFS distances.

Vertices are dense integers ``0..n-1``. Unreachable distances are stored as
:data:`INF` in distance arrays; scalar helpers return ``math.inf`` instead.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError

INF = 1 << 40


def _bfs(adj: Sequence[Sequence[int]], sources: Iterable[int], n: int, cutoff: int | None = None) -> np.ndarray:
    dist = np.full(n, INF, dtype=np.int64)
    queue = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if cutoff is not None and dx >= cutoff:
            continue
        for y in adj[x]:
            if dist[y] == INF:
                dist[y] = dx + 1
                queue.append(y)
    return dist


class DistanceOracle:
    """Lazily cached single-source BFS tables over an adjacency list.

    Population of the cache is guarded by a lock, so one oracle can be read
    from several threads.
    """

    def __init__(self, adj: Sequence[Sequence[int]]):
        self._adj = adj
        self.n = len(adj)
        self._cache: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    def from_source(self, source: int) -> np.ndarray:
        table = self._cache.get(source)
        if table is None:
            table = _bfs(self._adj, (source,), self.n)
            table.flags.writeable = False
            with self._lock:
                table = self._cache.setdefault(source, table)
        return table

    def dist(self, u: int, v: int) -> float | int:
        d = int(self.from_source(u)[v])
        return math.inf if d == INF else d

    def precompute(self, sources: Iterable[int] | None = None) -> None:
        for s in range(self.n) if sources is None else sources:
            self.from_source(s)

    def sphere(self, v: int, rho: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.from_source(v) == rho).tolist())

    def ball_of(self, v: int, rho: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.from_source(v) <= rho).tolist())

    def __len__(self):
        return len(self._cache)


def ball(oracle: DistanceOracle, S: Iterable[int], r: int) -> frozenset[int]:
    """Vertices within distance ``r`` of the set ``S`` (multi-source BFS)."""
    S = list(S)
    if not S:
        raise InvalidInputError("ball() needs a nonempty source set")
    if r < 0:
        raise InvalidInputError("radius must be >= 0")
    d = _bfs(oracle._adj, S, oracle.n, cutoff=r)
    return frozenset(np.flatnonzero(d <= r).tolist())


def _normalize_neighbors(n: int, pairs, directed: bool):
    out = [set() for _ in range(n)]
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInputError(f"vertex id out of range [0,{n}): {(u, v)}")
        if u == v:
            raise InvalidInputError(f"self-loop at vertex {u}")
        out[u].add(v)
        if not directed:
            out[v].add(u)
    return tuple(tuple(sorted(s)) for s in out)


class Graph:
    """Simple undirected graph. Duplicate edges are merged; self-loops rejected."""

    directed = False

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidInputError("vertex count must be nonnegative")
        self.n = n
        self.adj = _normalize_neighbors(n, edges, directed=False)
        self.oracle = DistanceOracle(self.adj)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    @property
    def out_adj(self):
        return self.adj

    @property
    def in_adj(self):
        return self.adj

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    out_neighbors = in_neighbors = neighbors

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted((v, *self.adj[v])))

    closed_out_neighborhood = closed_in_neighborhood = closed_neighborhood

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def is_regular(self) -> bool:
        return self.min_degree == self.max_degree

    @cached_property
    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return bool(np.all(_bfs(self.adj, (0,), self.n) < INF))

    @cached_property
    def girth(self) -> float | int:
        return girth(self)

    @cached_property
    def bipartition(self) -> tuple[int, ...] | None:
        """Side label (0/1) per vertex, or None when the graph is not bipartite."""
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] != -1:
                continue
            side[s] = 0
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if side[y] == -1:
                        side[y] = 1 - side[x]
                        queue.append(y)
                    elif side[y] == side[x]:
                        return None
        return tuple(side)

    def dist(self, u: int, v: int):
        return self.oracle.dist(u, v)

    def distances(self, source: int) -> np.ndarray:
        return self.oracle.from_source(source)

    reverse_distances = distances

    def geodesic(self, u: int, v: int) -> list[int]:
        """One shortest path from u to v (lowest-id predecessor at each step)."""
        dv = self.distances(v)
        if dv[u] >= INF:
            raise InvalidInputError(f"no path from {u} to {v}")
        path = [u]
        while path[-1] != v:
            x = path[-1]
            path.append(min(y for y in self.adj[x] if dv[y] == dv[x] - 1))
        return path


class Digraph:
    """Simple digraph (no loops, no parallel arcs). Digons are allowed."""

    directed = True

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidInputError("vertex count must be nonnegative")
        arcs = list(arcs)
        self.n = n
        self.out_adj = _normalize_neighbors(n, arcs, directed=True)
        self.in_adj = _normalize_neighbors(n, [(v, u) for u, v in arcs], directed=True)
        self.oracle = DistanceOracle(self.out_adj)
        self.reverse_oracle = DistanceOracle(self.in_adj)

    @classmethod
    def bidirected(cls, g: Graph) -> "Digraph":
        return cls(g.n, [(u, v) for u in range(g.n) for v in g.adj[u]])

    @classmethod
    def from_digons(cls, n: int, pairs: Iterable[tuple[int, int]], arcs: Iterable[tuple[int, int]] = ()) -> "Digraph":
        both = [a for u, v in pairs for a in ((u, v), (v, u))]
        return cls(n, [*both, *arcs])

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.m})"

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.out_adj == other.out_adj

    def __hash__(self):
        return hash((self.n, self.out_adj))

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    def has_arc(self, u: int, v: int) -> bool:
        a = self.out_adj[u]
        i = np.searchsorted(a, v)
        return i < len(a) and a[i] == v

    @cached_property
    def digons(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u, v in self.arcs() if u < v and self.has_arc(v, u))

    @cached_property
    def in_digon(self) -> tuple[bool, ...]:
        flags = [False] * self.n
        for u, v in self.digons:
            flags[u] = flags[v] = True
        return tuple(flags)

    def is_digon(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.digons

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self.out_adj[v]

    neighbors = out_neighbors

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self.in_adj[v]

    def closed_out_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted((v, *self.out_adj[v])))

    closed_neighborhood = closed_out_neighborhood

    def closed_in_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted((v, *self.in_adj[v])))

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    @cached_property
    def min_out_degree(self) -> int:
        return min((len(a) for a in self.out_adj), default=0)

    @cached_property
    def is_strongly_connected(self) -> bool:
        if self.n <= 1:
            return True
        return bool(np.all(self.distances(0) < INF) and np.all(self.reverse_distances(0) < INF))

    @property
    def is_connected(self) -> bool:
        return self.is_strongly_connected

    def dist(self, u: int, v: int):
        """Length of a shortest directed path from u to v."""
        return self.oracle.dist(u, v)

    def distances(self, source: int) -> np.ndarray:
        """dist(source, x) for every x."""
        return self.oracle.from_source(source)

    def reverse_distances(self, target: int) -> np.ndarray:
        """dist(x, target) for every x."""
        return self.reverse_oracle.from_source(target)

    def underlying(self) -> Graph:
        return Graph(self.n, self.arcs())


def build_graph(edges: Iterable[tuple[int, int]], n: int | None = None) -> Graph:
    edges = [(int(u), int(v)) for u, v in edges]
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)


def build_digraph(arcs: Iterable[tuple[int, int]], n: int | None = None) -> Digraph:
    arcs = [(int(u), int(v)) for u, v in arcs]
    if n is None:
        n = 1 + max((max(a) for a in arcs), default=-1)
    return Digraph(n, arcs)


def girth(g: Graph) -> float | int:
    """Length of a shortest cycle, ``math.inf`` for forests.

    One truncated BFS per root; a BFS stops once no shorter cycle can be
    closed from its current frontier.
    """
    best = math.inf
    adj = g.adj
    n = g.n
    dist = [-1] * n
    parent = [-1] * n
    for root in range(n):
        touched = [root]
        dist[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if dist[y] == -1:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    touched.append(y)
                    queue.append(y)
                elif y != parent[x]:
                    best = min(best, dist[x] + dist[y] + 1)
        for v in touched:
            dist[v] = -1
            parent[v] = -1
    return best


def sphere(g: Graph | Digraph, v: int, rho: int) -> frozenset[int]:
    return g.oracle.sphere(v, rho)


def growth_parameter(g: Graph, h: int) -> int:
    """Largest q such that g has (h, q)-growth.

    For every vertex v and neighbour u, count vertices w with dist(w, v) == h
    and dist(w, u) >= h; return the minimum count.
    """
    if h < 1:
        raise InvalidInputError("h must be >= 1")
    best = None
    for v in range(g.n):
        dv = g.distances(v) == h
        for u in g.adj[v]:
            c = int(np.count_nonzero(dv & (g.distances(u) >= h)))
            best = c if best is None else min(best, c)
            if best == 0:
                return 0
    return 0 if best is None else best


def digraph_growth_parameter(d: Digraph, h: int) -> int:
    """Digraph analogue: v ranges over vertices, y over in-neighbours of v,
    counting w with dist(v, w) == h and dist(y, w) >= h."""
    if h < 1:
        raise InvalidInputError("h must be >= 1")
    best = None
    for v in range(d.n):
        dv = d.distances(v) == h
        for y in d.in_adj[v]:
            c = int(np.count_nonzero(dv & (d.distances(y) >= h)))
            best = c if best is None else min(best, c)
            if best == 0:
                return 0
    return 0 if best is None else best


def digraph_q(d: Digraph, v: int) -> int:
    return d.out_degree(v) - (1 if d.in_digon[v] else 0)


def digraph_min_q(d: Digraph) -> int:
    """min over v of out-degree, less one for vertices lying on a digon."""
    return min((digraph_q(d, v) for v in range(d.n)), default=0)
