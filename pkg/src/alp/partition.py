"""Vertex partitions: weighted Louvain, seeded BFS regions, and a text exchange format."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, VertexSet


@dataclass(frozen=True, eq=False)
class Partition:
    assignment: np.ndarray  # vertex -> community id, dense in [0, community_count)
    community_count: int

    @classmethod
    def from_assignment(cls, labels: Sequence[int], canonical: bool = True) -> "Partition":
        """Validate ``labels``; with ``canonical`` renumber communities by smallest member."""
        arr = np.asarray(labels, dtype=np.int64).ravel()
        if len(arr) == 0:
            return cls(arr, 0)
        if arr.min() < 0:
            raise ValueError("community ids must be nonnegative")
        if canonical:
            uniq, first = np.unique(arr, return_index=True)
            remap = np.empty(arr.max() + 1, dtype=np.int64)
            remap[uniq[np.argsort(first)]] = np.arange(len(uniq))
            arr = remap[arr]
        k = int(arr.max()) + 1
        if len(np.unique(arr)) != k:
            raise ValueError("community ids are not dense")
        arr.flags.writeable = False
        return cls(arr, k)

    @property
    def vertex_count(self) -> int:
        return len(self.assignment)

    @property
    def communities(self) -> list[VertexSet]:
        n = self.vertex_count
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.searchsorted(self.assignment[order], np.arange(self.community_count + 1))
        return [VertexSet.of(order[bounds[c]:bounds[c + 1]], n) for c in range(self.community_count)]

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == c)


def singleton_partition(n: int) -> Partition:
    return Partition.from_assignment(np.arange(n))


def whole_partition(n: int) -> Partition:
    return Partition.from_assignment(np.zeros(n, dtype=np.int64))


def _edge_weights(g: Graph) -> tuple[np.ndarray, float]:
    """Weighted degrees (loops counted twice) and total edge weight m."""
    loops = g.sources == g.targets
    deg = np.bincount(g.sources, weights=g.weights, minlength=g.vertex_count)
    deg += np.bincount(g.sources[loops], weights=g.weights[loops], minlength=g.vertex_count)
    return deg, float(deg.sum()) / 2.0


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity with resolution 1 over the edge weights of ``g``."""
    if not g.is_symmetric:
        raise ValueError("modularity needs a symmetric graph")
    if p.vertex_count != g.vertex_count:
        raise ValueError("partition does not cover the graph")
    deg, m = _edge_weights(g)
    if m <= 0:
        raise ValueError("modularity is undefined on a graph without edge weight")
    a = p.assignment
    inside = a[g.sources] == a[g.targets]
    loops = g.sources == g.targets
    # each non-loop intra edge is stored twice, each loop once
    intra = np.bincount(a[g.sources[inside]], weights=g.weights[inside], minlength=p.community_count).astype(float)
    intra += np.bincount(a[g.sources[inside & loops]], weights=g.weights[inside & loops], minlength=p.community_count)
    intra /= 2.0
    tot = np.bincount(a, weights=deg, minlength=p.community_count)
    return float(np.sum(intra / m - (tot / (2.0 * m)) ** 2))


# --- Louvain ---------------------------------------------------------------------------


def _one_level(adj, loops, k, m, order, min_gain):
    """Local-moving phase on one level. Returns (community per node, moved?)."""
    n = len(adj)
    com = list(range(n))
    tot = list(k)
    inv2m = 1.0 / (2.0 * m)
    moved_any = False
    while True:
        moved = False
        for i in order:
            ci = com[i]
            ki = k[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                cj = com[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            stay = links.get(ci, 0.0) - tot[ci] * ki * inv2m
            best_c, best = ci, float("-inf")
            for c, wic in links.items():
                if c == ci:
                    continue
                gain = wic - tot[c] * ki * inv2m
                if gain > best or (gain == best and c < best_c):
                    best_c, best = c, gain
            if best_c != ci and (best - stay) / m > min_gain:
                com[i] = best_c
                moved = True
            else:
                best_c = ci
            tot[best_c] += ki
        if not moved:
            return com, moved_any
        moved_any = True


def _aggregate(adj, loops, com):
    """Contract communities into super-nodes with summed weights and self-loops."""
    ids: dict[int, int] = {}
    for c in com:
        if c not in ids:
            ids[c] = len(ids)
    nc = len(ids)
    new_adj: list[dict[int, float]] = [dict() for _ in range(nc)]
    new_loops = [0.0] * nc
    for i, nbrs in enumerate(adj):
        ci = ids[com[i]]
        new_loops[ci] += loops[i]
        row = new_adj[ci]
        for j, w in nbrs.items():
            cj = ids[com[j]]
            if cj == ci:
                new_loops[ci] += w / 2.0  # seen from both endpoints
            else:
                row[cj] = row.get(cj, 0.0) + w
    return new_adj, new_loops, [ids[c] for c in com]


def louvain_levels(g: Graph, seed: int = 0, min_gain: float = 1e-7, weighted: bool = True) -> Iterator[Partition]:
    """Yield the flat partition after each Louvain level that moved at least one node."""
    if not g.is_symmetric:
        raise ValueError("Louvain needs a symmetric graph")
    if min_gain < 0:
        raise ValueError("min_gain must be >= 0")
    n = g.vertex_count
    weights = g.weights if weighted else np.ones(g.arc_count)
    adj: list[dict[int, float]] = [dict() for _ in range(n)]
    loops = [0.0] * n
    for u, v, w in zip(g.sources.tolist(), g.targets.tolist(), weights.tolist()):
        if u == v:
            loops[u] += w
        else:
            adj[u][v] = adj[u].get(v, 0.0) + w
    k = [2.0 * loops[i] + sum(adj[i].values()) for i in range(n)]
    m = sum(k) / 2.0
    if m <= 0:
        return
    rng = np.random.default_rng(seed)
    flat = list(range(n))
    while True:
        order = rng.permutation(len(adj)).tolist()
        com, moved = _one_level(adj, loops, k, m, order, min_gain)
        if not moved:
            return
        adj, loops, level_ids = _aggregate(adj, loops, com)
        flat = [level_ids[c] for c in flat]
        k = [2.0 * loops[i] + sum(adj[i].values()) for i in range(len(adj))]
        yield Partition.from_assignment(flat)
        if len(adj) == 1:
            return


def louvain(g: Graph, seed: int = 0, min_gain: float = 1e-7, weighted: bool = True) -> Partition:
    """Two-phase Louvain; deterministic for a fixed seed.

    Ties between equally good target communities go to the lowest community
    id; a node only moves when modularity rises by more than ``min_gain``.
    ``weighted=False`` partitions on hop counts instead of edge weights.
    """
    result = singleton_partition(g.vertex_count) if g.vertex_count > 1 else whole_partition(g.vertex_count)
    for result in louvain_levels(g, seed, min_gain, weighted):
        pass
    return result


def bfs_regions(g: Graph, k: int, seed: int = 0) -> Partition:
    """Grow ``k`` regions by simultaneous BFS from seeded random sources.

    Components no source reaches get one extra region each (seeded at their
    lowest vertex), so the result can hold more than ``k`` communities on a
    disconnected graph.
    """
    n = g.vertex_count
    if not 1 <= k <= max(n, 1):
        raise ValueError("k must lie in [1, vertex_count]")
    rng = np.random.default_rng(seed)
    sources = sorted(rng.choice(n, size=k, replace=False).tolist())
    label = [-1] * n
    nbrs = g.neighbors
    queue = deque()
    for c, s in enumerate(sources):
        label[s] = c
        queue.append(s)
    next_label = k
    start = 0
    while True:
        while queue:
            u = queue.popleft()
            cu = label[u]
            for v, _ in nbrs[u]:
                if label[v] < 0:
                    label[v] = cu
                    queue.append(v)
        while start < n and label[start] >= 0:
            start += 1
        if start == n:
            break
        label[start] = next_label
        next_label += 1
        queue.append(start)
    return Partition.from_assignment(label)


def write_partition(p: Partition) -> str:
    return "".join(f"{v} {c}\n" for v, c in enumerate(p.assignment.tolist()))


def read_partition(text: str, vertex_count: int | None = None) -> Partition:
    labels: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<vertex-id> <community-id>'")
        v, c = int(parts[0]), int(parts[1])
        if v in labels:
            raise ValueError(f"line {lineno}: vertex {v} listed twice")
        labels[v] = c
    n = len(labels) if vertex_count is None else vertex_count
    if sorted(labels) != list(range(n)):
        raise ValueError("partition file must list every vertex exactly once")
    return Partition.from_assignment([labels[v] for v in range(n)], canonical=False)
