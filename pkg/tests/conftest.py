import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from alp.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def floyd_warshall(g: Graph) -> np.ndarray:
    """All-pairs distances by dense relaxation; independent of every Dijkstra in the package."""
    n = g.vertex_count
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.arcs():
        d[u, v] = min(d[u, v], w)
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


def simple_paths_min(g: Graph, s: int, t: int) -> float:
    """Shortest s-t distance by enumerating every simple path (tiny graphs only)."""
    adj = g.neighbors
    best = np.inf
    stack = [(s, 0.0, {s})]
    while stack:
        u, d, seen = stack.pop()
        if u == t:
            best = min(best, d)
            continue
        for v, w in adj[u]:
            if v not in seen:
                stack.append((v, d + w, seen | {v}))
    return best


def set_partitions(n: int):
    """Every partition of range(n) as a restricted-growth label list."""
    def rec(prefix, k):
        if len(prefix) == n:
            yield list(prefix)
            return
        for c in range(k + 1):
            yield from rec(prefix + [c], max(k, c + 1))
    if n == 0:
        yield []
        return
    yield from rec([0], 1)


def undirected(n, edges, weights=None) -> Graph:
    edges = list(edges)
    src = [u for u, _ in edges]
    dst = [v for _, v in edges]
    w = [1.0] * len(edges) if weights is None else list(weights)
    return Graph.from_arcs(n, src, dst, w)


def path_graph(n: int) -> Graph:
    return undirected(n, [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def two_triangles_bridge() -> Graph:
    return undirected(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@st.composite
def small_graphs(draw, min_n=1, max_n=12, integer=True, connected=False):
    """Random symmetric graphs with integer (or real) nonnegative weights."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    if connected:
        perm = draw(st.permutations(range(n)))
        chosen = sorted(set(chosen) | {tuple(sorted((perm[i], perm[i + 1]))) for i in range(n - 1)})
    wst = st.integers(0, 9).map(float) if integer else st.floats(0.0, 10.0, allow_nan=False)
    weights = draw(st.lists(wst, min_size=len(chosen), max_size=len(chosen)))
    return undirected(n, chosen, weights)
