"""Core graph machinery: weighted graphs, canonical shortest paths, spanner checks.

All distances are exact integers; ``UNREACHABLE`` is the reserved value for
disconnected pairs and never takes part in arithmetic.  Shortest-path ties
are broken toward the smallest-id predecessor, per source, so every derived
artifact (paths, per-pair maximum edge weights, shortest-path trees) is a
pure function of the graph.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable

Edge = tuple[int, int]

UNREACHABLE = math.inf


def edge_key(u: int, v: int) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


def terminal_pairs(terminals: Iterable[int]) -> list[Edge]:
    """All unordered terminal pairs in ascending lexicographic order."""
    return list(combinations(sorted(set(terminals)), 2))


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph on vertices 0..n-1 with integer edge weights >= 1.

    Edges are normalized to (u, v, w) with u < v and stored sorted, so equal
    graphs compare equal and serialize identically.  Instances are immutable
    and safe to share across concurrent workers.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen: set[Edge] = set()
        norm = []
        for u, v, w in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) references a vertex outside 0..{self.n - 1}")
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"edge ({u},{v}) weight {w!r} is not an integer >= 1")
            key = edge_key(u, v)
            if key in seen:
                raise ValueError(f"parallel edge {key}")
            seen.add(key)
            norm.append((key[0], key[1], w))
        norm.sort()
        object.__setattr__(self, "edges", tuple(norm))

    @cached_property
    def adj(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-vertex (neighbor, weight) pairs sorted by neighbor id."""
        lists: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            lists[u].append((v, w))
            lists[v].append((u, w))
        return tuple(tuple(sorted(entry)) for entry in lists)

    @cached_property
    def weight_max(self) -> int:
        """Largest edge weight; 0 for an edgeless graph."""
        return max((w for _, _, w in self.edges), default=0)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset((u, v) for u, v, _ in self.edges)

    @cached_property
    def weight_map(self) -> dict[Edge, int]:
        return {(u, v): w for u, v, w in self.edges}

    def weight(self, u: int, v: int) -> int:
        return self.weight_map[edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.weight_map

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def _connected(self) -> bool:
        seen = [False] * self.n
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            x = queue.popleft()
            for y, _ in self.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    queue.append(y)
        return count == self.n

    def is_connected(self) -> bool:
        return self._connected


def write_graph_text(g: WeightedGraph) -> str:
    """Serialize to the plain text format: `n m` then `u v w` per edge.

    Edges come out in ascending (u, v) order with u < v, so the encoding is
    bit-exact for equal graphs.
    """
    lines = [f"{g.n} {len(g.edges)}"]
    lines.extend(f"{u} {v} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> WeightedGraph:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty graph text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"expected header 'n m', got {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} edge lines, got {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1]), int(parts[2])))
    return WeightedGraph(n, tuple(edges))


class BudgetMode(Enum):
    GLOBAL = "global"
    LOCAL = "local"


@dataclass(frozen=True)
class ErrorBudget:
    """Additive error allowance: c * W_max (GLOBAL) or c * W(u, v) (LOCAL)."""

    mode: BudgetMode
    c: int

    def __post_init__(self) -> None:
        if not isinstance(self.c, int) or self.c < 0:
            raise ValueError(f"budget coefficient must be a nonnegative integer, got {self.c!r}")

    def allowance(self, g: WeightedGraph, pt: "PathTable", u: int, v: int) -> int:
        if self.mode is BudgetMode.GLOBAL:
            return self.c * g.weight_max
        return self.c * pt.max_weight(u, v)


def dijkstra_distances(adj, n: int, source: int) -> list:
    """Single-source shortest-path weights; UNREACHABLE marks disconnection."""
    dist = [UNREACHABLE] * n
    dist[source] = 0
    heap = [(0, source)]
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        d, x = pop(heap)
        if d > dist[x]:
            continue
        for y, w in adj[x]:
            nd = d + w
            if nd < dist[y]:
                dist[y] = nd
                push(heap, (nd, y))
    return dist


def _min_id_parents(adj, dist, source: int) -> list[int]:
    # Smallest-id predecessor among tight relaxations; order-independent, so
    # the resulting tree does not depend on heap internals.
    n = len(dist)
    parent = [-1] * n
    for v in range(n):
        if v == source or dist[v] == UNREACHABLE:
            continue
        for u, w in adj[v]:
            if dist[u] != UNREACHABLE and dist[u] + w == dist[v]:
                parent[v] = u
                break
    return parent


def single_source(g: WeightedGraph, source: int) -> tuple[list, list[int]]:
    """(distances, canonical tree parents) from one source."""
    dist = dijkstra_distances(g.adj, g.n, source)
    return dist, _min_id_parents(g.adj, dist, source)


def subgraph_adjacency(g: WeightedGraph, edges: Iterable[Edge]):
    """Adjacency lists of the subgraph induced by the given edges of g."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for u, v in edges:
        w = g.weight_map[edge_key(u, v)]
        adj[u].append((v, w))
        adj[v].append((u, w))
    for entry in adj:
        entry.sort()
    return adj


class PathTable:
    """All-pairs distances, canonical paths, and per-pair maximum edge weight.

    The canonical path of an unordered pair {u, v} comes from the
    shortest-path tree rooted at min(u, v); path(v, u) is its reverse.
    Instances are immutable after construction.
    """

    def __init__(self, graph: WeightedGraph, dist, parent, pair_wmax):
        self.graph = graph
        self._dist = dist
        self._parent = parent
        self._wmax = pair_wmax
        self._edge_cache: dict[Edge, tuple[Edge, ...]] = {}

    def dist(self, u: int, v: int):
        return self._dist[u][v]

    def reachable(self, u: int, v: int) -> bool:
        return self._dist[u][v] != UNREACHABLE

    def max_weight(self, u: int, v: int) -> int:
        """Largest edge weight on the canonical u-v path (0 when u == v)."""
        return self._wmax[u][v]

    def tree_parent(self, root: int, v: int) -> int:
        """Predecessor of v in the canonical shortest-path tree from root."""
        return self._parent[root][v]

    def path(self, u: int, v: int) -> tuple[int, ...]:
        if u == v:
            return (u,)
        if not self.reachable(u, v):
            raise ValueError(f"no path between {u} and {v}")
        s, t = (u, v) if u < v else (v, u)
        par = self._parent[s]
        rev = [t]
        while rev[-1] != s:
            rev.append(par[rev[-1]])
        if u < v:
            rev.reverse()
        return tuple(rev)

    def path_edges(self, u: int, v: int) -> tuple[Edge, ...]:
        """Canonical path as a sequence of (min, max) edges."""
        key = edge_key(u, v) if u != v else (u, v)
        hit = self._edge_cache.get(key)
        if hit is None:
            p = self.path(*key)
            hit = tuple(edge_key(a, b) for a, b in zip(p, p[1:]))
            self._edge_cache[key] = hit
        return hit


def build_path_table(g: WeightedGraph) -> PathTable:
    """Deterministic all-pairs table (see PathTable for the tie-break rule)."""
    n = g.n
    adj = g.adj
    wt = g.weight_map
    dists = []
    parents = []
    for s in range(n):
        d = dijkstra_distances(adj, n, s)
        dists.append(d)
        parents.append(_min_id_parents(adj, d, s))
    wmax = [[0] * n for _ in range(n)]
    for s in range(n):
        d = dists[s]
        par = parents[s]
        row = [0] * n
        order = sorted((v for v in range(n) if v != s and d[v] != UNREACHABLE),
                       key=lambda v: (d[v], v))
        for v in order:
            p = par[v]
            w = wt[edge_key(p, v)]
            row[v] = row[p] if row[p] > w else w
        for v in range(s + 1, n):
            if d[v] != UNREACHABLE:
                wmax[s][v] = row[v]
                wmax[v][s] = row[v]
    return PathTable(g, dists, parents, wmax)


def verify_spanner(g: WeightedGraph, h_edges: Iterable[Edge], pairs, budget: ErrorBudget,
                   pt: PathTable) -> list[tuple[int, int]]:
    """Pairs whose distance in the subgraph exceeds dist_G + allowance.

    An empty result means h_edges is a valid spanner for the given pairs.
    Pairs disconnected in g itself are never reported.
    """
    hset = {edge_key(u, v) for u, v in h_edges}
    extra = hset - g.edge_set
    if extra:
        raise ValueError(f"subgraph edges not present in the graph: {sorted(extra)[:3]}")
    h_adj = subgraph_adjacency(g, hset)
    rows: dict[int, list] = {}
    violated = []
    for u, v in pairs:
        if u == v:
            continue
        dg = pt.dist(u, v)
        if dg == UNREACHABLE:
            continue
        if u in rows:
            dh = rows[u][v]
        elif v in rows:
            dh = rows[v][u]
        else:
            rows[u] = dijkstra_distances(h_adj, g.n, u)
            dh = rows[u][v]
        if dh == UNREACHABLE or dh > dg + budget.allowance(g, pt, u, v):
            violated.append((u, v))
    return violated


def hop_radius(g: WeightedGraph) -> int:
    """Smallest hop eccentricity over all vertices (edge counts, not weights)."""
    n = g.n
    adj = g.adj
    best = None
    for s in range(n):
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        reached = 1
        ecc = 0
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if level[y] < 0:
                    level[y] = level[x] + 1
                    ecc = level[y] if level[y] > ecc else ecc
                    reached += 1
                    queue.append(y)
        if reached != n:
            raise ValueError("hop radius is undefined for a disconnected graph")
        if best is None or ecc < best:
            best = ecc
    return best
