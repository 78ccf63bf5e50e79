import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alp.embedding import build_alp_index, build_alt_index, select_landmarks
from alp.heuristics import (
    AlpHeuristic, AltHeuristic, HeuristicConfig, QuadSides, alp_bounds, alp_h, alt_h,
)
from alp.partition import Partition, bfs_regions, louvain
from conftest import floyd_warshall, path_graph, small_graphs, undirected

NO_PTOLEMY = HeuristicConfig(use_ptolemy=False)
sides = st.floats(0.0, 1e3, allow_nan=False)


def test_alt_h_tight_on_a_line():
    idx = build_alt_index(path_graph(3), [0])
    assert alt_h(idx, 1, 2) == 1.0 == floyd_warshall(path_graph(3))[1, 2]


def test_alt_h_identity():
    idx = build_alt_index(path_graph(3), [0, 2])
    assert alt_h(idx, 1, 1) == 0.0


def test_alt_h_takes_max_over_landmarks():
    idx = build_alt_index(path_graph(3), [0, 2])
    assert alt_h(idx, 0, 2) == 2.0


def test_alt_h_ignores_infinite_entries():
    g = undirected(4, [(0, 1), (2, 3)], [1.0, 5.0])
    idx = build_alt_index(g, [0, 2])
    assert alt_h(idx, 0, 1) == 1.0
    assert alt_h(idx, 2, 3) == 5.0
    assert alt_h(idx, 0, 3) == 0.0


def test_alp_bounds_five_path():
    b = alp_bounds(QuadSides(1.0, 4.0, 1.0))
    assert b[0] == 2.0 and b[5] == 2.0


def test_alp_bounds_degenerate_quadrilateral():
    b = alp_bounds(QuadSides(0.0, 0.0, 0.0))
    assert b[:5] == [0.0] * 5 and b[5] == -math.inf


def test_alp_bounds_c4_opposite_vertices():
    b = alp_bounds(QuadSides(1.0, 2.0, 1.0))
    assert b[0] == 0.0 and b[1] == b[2] == -2.0 and b[5] == 0.0
    assert max(b) <= floyd_warshall(undirected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))[0, 2]


def test_alp_bounds_ptolemy_off():
    assert alp_bounds(QuadSides(1.0, 4.0, 1.0), NO_PTOLEMY)[5] == -math.inf


def _five_path_alp():
    g = path_graph(5)
    return build_alp_index(g, Partition.from_assignment([0, 0, 0, 1, 1]), [0, 4])


def test_alp_h_identity():
    assert alp_h(_five_path_alp(), 3, 3) == 0.0


def test_alp_h_five_path():
    assert alp_h(_five_path_alp(), 1, 3) == 2.0


def test_alp_h_all_bounds_negative_clamps_to_zero():
    g = path_graph(4)
    idx = build_alp_index(g, Partition.from_assignment([0, 0, 1, 1]), [1, 2])
    raw = alp_bounds(QuadSides(1.0, 1.0, 1.0))
    assert max(raw) == -1.0
    assert alp_h(idx, 0, 3) == 0.0
    assert alp_h(idx, 0, 3, HeuristicConfig(clamp_nonnegative=False)) == -1.0
    assert alp_h(idx, 0, 3) <= floyd_warshall(g)[0, 3] == 3.0


def test_alp_h_same_partition_uses_triangle_bound():
    g = path_graph(5)
    idx = build_alp_index(g, Partition.from_assignment([0, 0, 0, 1, 1]), [0, 4])
    assert alp_h(idx, 2, 0) == 2.0 and alp_h(idx, 1, 2) == 1.0


def test_alp_h_infinite_label_gives_zero():
    g = path_graph(3)
    idx = build_alp_index(g, Partition.from_assignment([0, 1, 0]), [0, 1], mode="induced")
    assert alp_h(idx, 2, 1) == 0.0 and alp_h(idx, 1, 2) == 0.0
    assert AlpHeuristic(idx)(2, 1) == 0.0 and AlpHeuristic(idx)(1, 2) == 0.0


@given(sides, sides, sides)
def test_triangle_bounds_reduce_to_three(a, b, c):
    l1, l2, l3, l4, l5, l6 = alp_bounds(QuadSides(a, b, c))
    tol = 1e-12 * max(1.0, a, b, c)
    assert l4 == pytest.approx(max(l1, l2), abs=tol)
    assert l5 == pytest.approx(max(l1, l3), abs=tol)
    assert max(l1, l2, l3, l4, l5) == pytest.approx(max(l1, l2, l3), abs=tol)


@given(sides, sides, sides)
def test_ptolemy_bound_never_beats_first_bound(a, b, c):
    # with both diagonals replaced by triangle lower bounds the Ptolemy
    # estimate equals b - a - c when b >= max(a, c) and is <= 0 otherwise
    l1, *_, l6 = alp_bounds(QuadSides(a, b, c))
    assert l6 <= max(l1, 0.0) + 1e-9 * max(1.0, a, b, c)


@given(sides, sides, sides)
def test_disabling_ptolemy_never_increases(a, b, c):
    q = QuadSides(a, b, c)
    assert max(alp_bounds(q, NO_PTOLEMY)) <= max(alp_bounds(q))


def _scenario(g, seed):
    p = louvain(g, seed=seed) if g.weights.sum() > 0 else bfs_regions(g, 1, seed)
    lm = select_landmarks(g, p, "random", seed)
    return p, lm


@settings(max_examples=80, deadline=None)
@given(small_graphs(min_n=2, max_n=18, integer=False, connected=True), st.integers(0, 999), st.booleans())
def test_fast_closures_match_reference(g, seed, ptolemy):
    p, lm = _scenario(g, seed)
    cfg = HeuristicConfig(use_ptolemy=ptolemy)
    for mode in ("exact", "induced"):
        idx = build_alp_index(g, p, lm, mode)
        h = AlpHeuristic(idx, cfg)
        for t in range(g.vertex_count):
            ht = h.bind(t)
            for v in range(g.vertex_count):
                assert ht(v) == alp_h(idx, v, t, cfg)
    alt = build_alt_index(g, lm)
    for v in range(g.vertex_count):
        for t in range(g.vertex_count):
            ref = max(abs(alt.dist_table[i, v] - alt.dist_table[i, t]) for i in range(len(lm)))
            assert alt_h(alt, v, t) == pytest.approx(ref, abs=0)


@settings(max_examples=80, deadline=None)
@given(small_graphs(min_n=2, max_n=20, integer=False, connected=True), st.integers(0, 999))
def test_exact_bounds_admissible_symmetric_nonnegative(g, seed):
    p, lm = _scenario(g, seed)
    fw = floyd_warshall(g)
    alp = AlpHeuristic(build_alp_index(g, p, lm, "exact"), NO_PTOLEMY)
    alt = AltHeuristic(build_alt_index(g, lm))
    n = g.vertex_count
    H = np.array([[alp(v, t) for t in range(n)] for v in range(n)])
    A = np.array([[alt(v, t) for t in range(n)] for v in range(n)])
    tol = 1e-9 * np.maximum(1.0, fw)
    assert (H <= fw + tol).all() and (A <= fw + tol).all()
    assert (H >= 0).all() and (np.diag(H) == 0).all()
    np.testing.assert_allclose(H, H.T, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(A, A.T, rtol=1e-12, atol=1e-12)


def test_quad_sides_from_index():
    h = AlpHeuristic(_five_path_alp())
    assert h.quad(1, 3) == QuadSides(1.0, 4.0, 1.0)
