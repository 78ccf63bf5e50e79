"""Point-to-point Dijkstra and A* with reopening.

Heap entries are ``(priority, vertex, g)``: at equal priority the smaller
vertex id is expanded first, so every run is reproducible.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

from .graph import Graph
from .heuristics import bind

INF = math.inf


@dataclass
class QueryStats:
    expanded: int = 0
    reopened: int = 0
    heap_pushes: int = 0
    heuristic_evals: int = 0
    wall_time: float = 0.0  # seconds, monotonic clock


@dataclass
class QueryResult:
    distance: float  # inf when unreachable
    path: list[int]
    stats: QueryStats = field(default_factory=QueryStats)

    @property
    def reachable(self) -> bool:
        return self.distance != INF


def _walk_back(pred, s: int, t: int) -> list[int]:
    path = [t]
    while path[-1] != s:
        path.append(pred[path[-1]])
    path.reverse()
    return path


def dijkstra_query(g: Graph, s: int, t: int) -> QueryResult:
    n = g.vertex_count
    if not (0 <= s < n and 0 <= t < n):
        raise IndexError("query vertex outside the graph")
    start = time.perf_counter()
    stats = QueryStats()
    adj = g.neighbors
    dist = [INF] * n
    pred = [-1] * n
    done = bytearray(n)
    dist[s] = 0.0
    heap = [(0.0, s)]
    stats.heap_pushes = 1
    pop, push = heapq.heappop, heapq.heappush
    expanded = pushes = 0
    while heap:
        d, u = pop(heap)
        if done[u]:
            continue
        done[u] = 1
        expanded += 1
        if u == t:
            break
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                push(heap, (nd, v))
                pushes += 1
    stats.expanded = expanded
    stats.heap_pushes += pushes
    path = _walk_back(pred, s, t) if done[t] else []
    stats.wall_time = time.perf_counter() - start
    return QueryResult(dist[t] if done[t] else INF, path, stats)


def astar_query(g: Graph, h, s: int, t: int) -> QueryResult:
    """A* from ``s`` to ``t`` under heuristic ``h`` (``h(v, t)`` or an object with ``bind``).

    A vertex is pushed again whenever a strictly shorter g-value reaches it,
    even after it was expanded, so admissible but inconsistent heuristics
    still give exact distances. Heuristic values are memoized per query.
    """
    n = g.vertex_count
    if not (0 <= s < n and 0 <= t < n):
        raise IndexError("query vertex outside the graph")
    start = time.perf_counter()
    stats = QueryStats()
    ht = bind(h, t)
    adj = g.neighbors
    gval = [INF] * n
    hval: list = [None] * n
    pred = [-1] * n
    closed = bytearray(n)
    gval[s] = 0.0
    hs = hval[s] = ht(s)
    evals = 1
    heap = [(hs, s, 0.0)]
    pop, push = heapq.heappop, heapq.heappush
    expanded = reopened = 0
    pushes = 1
    found = False
    while heap:
        _, u, gu = pop(heap)
        if gu > gval[u]:
            continue
        if closed[u]:
            reopened += 1
        else:
            closed[u] = 1
        expanded += 1
        if u == t:
            found = True
            break
        for v, w in adj[u]:
            ng = gu + w
            if ng < gval[v]:
                gval[v] = ng
                pred[v] = u
                hv = hval[v]
                if hv is None:
                    hv = hval[v] = ht(v)
                    evals += 1
                push(heap, (ng + hv, v, ng))
                pushes += 1
    stats.expanded = expanded
    stats.reopened = reopened
    stats.heap_pushes = pushes
    stats.heuristic_evals = evals
    path = _walk_back(pred, s, t) if found else []
    stats.wall_time = time.perf_counter() - start
    return QueryResult(gval[t] if found else INF, path, stats)
