import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alp.graph import (
    FAMILIES, Graph, GraphFormatError, NegativeWeightError, VertexRangeError, VertexSet, generate,
    graph_from_bytes, graph_to_bytes, induced_subgraph, largest_component, load_graph, parse_dimacs,
    parse_generator_spec, to_dimacs,
)
from conftest import floyd_warshall, path_graph, simple_paths_min, small_graphs


def test_parse_single_arc_is_symmetrized():
    g = parse_dimacs(b"p sp 2 1\na 1 2 3")
    assert g.vertex_count == 2
    assert g.is_symmetric
    assert sorted(g.arcs()) == [(0, 1, 3.0), (1, 0, 3.0)]


def test_parse_single_vertex():
    g = parse_dimacs("p sp 1 0")
    assert g.vertex_count == 1 and g.arc_count == 0


def test_parse_triangle_distance_through_middle():
    g = parse_dimacs("c toy\np sp 3 3\na 1 2 1\na 2 3 1\na 1 3 5\n")
    assert floyd_warshall(g)[0, 2] == 2.0


def test_parse_collapses_duplicates_to_min_weight():
    g = parse_dimacs("p sp 2 3\na 1 2 7\na 2 1 4\na 1 2 9\n")
    assert sorted(g.arcs()) == [(0, 1, 4.0), (1, 0, 4.0)]


def test_keep_directed_stores_digraph():
    g = parse_dimacs("p sp 3 2\na 1 2 1\na 2 3 1\n", symmetrize=False)
    assert not g.is_symmetric
    assert sorted(g.arcs()) == [(0, 1, 1.0), (1, 2, 1.0)]
    sym = parse_dimacs("p sp 2 2\na 1 2 1\na 2 1 1\n", symmetrize=False)
    assert sym.is_symmetric


@pytest.mark.parametrize(
    "text, exc, lineno",
    [
        ("p sp 2 1\na 1 x 3\n", GraphFormatError, 2),
        ("p sp 2 1\na 1 2\n", GraphFormatError, 2),
        ("c hi\np sp 2 1\na 1 3 3\n", VertexRangeError, 3),
        ("p sp 2 1\na 0 1 3\n", VertexRangeError, 2),
        ("p sp 2 1\na 1 2 -3\n", NegativeWeightError, 2),
        ("a 1 2 3\np sp 2 1\n", GraphFormatError, 1),
        ("p sp 2 1\nq\n", GraphFormatError, 2),
        ("p sp 2 2\na 1 2 3\n", GraphFormatError, 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, exc, lineno):
    with pytest.raises(exc) as info:
        parse_dimacs(text)
    assert info.value.lineno == lineno


def test_parse_missing_problem_line():
    with pytest.raises(GraphFormatError):
        parse_dimacs("c nothing here\n")


@given(small_graphs(integer=True))
def test_dimacs_round_trip(g):
    assert parse_dimacs(to_dimacs(g)).same_as(g)


@given(small_graphs(integer=False))
def test_dimacs_round_trip_real_weights(g):
    assert parse_dimacs(to_dimacs(g)).same_as(g)


@given(st.lists(st.tuples(st.integers(1, 6), st.integers(1, 6), st.integers(0, 20)), max_size=15))
def test_directed_round_trip_preserves_arc_multiset(arcs):
    text = f"p sp 6 {len(arcs)}\n" + "".join(f"a {u} {v} {w}\n" for u, v, w in arcs)
    g = parse_dimacs(text, symmetrize=False)
    again = parse_dimacs(to_dimacs(g), symmetrize=False)
    assert again.vertex_count == 6
    assert sorted(again.arcs()) == sorted((u - 1, v - 1, float(w)) for u, v, w in arcs)


@given(small_graphs())
def test_binary_cache_round_trip(g):
    back = graph_from_bytes(graph_to_bytes(g))
    assert back.same_as(g)
    assert back.fingerprint == g.fingerprint


def test_binary_cache_layout():
    data = graph_to_bytes(path_graph(3))
    assert data[:4] == b"ALPG"
    assert int.from_bytes(data[4:8], "little") == 1
    assert int.from_bytes(data[8:16], "little") == 3
    assert int.from_bytes(data[16:24], "little") == 4
    with pytest.raises(GraphFormatError):
        graph_from_bytes(data[:-1])


def test_load_graph_detects_format(tmp_path):
    g = generate("grid", {"rows": 3, "cols": 3})
    (tmp_path / "g.gr").write_text(to_dimacs(g))
    (tmp_path / "g.alpg").write_bytes(graph_to_bytes(g))
    assert load_graph(tmp_path / "g.gr").same_as(g)
    assert load_graph(tmp_path / "g.alpg").same_as(g)


def test_grid_2x2():
    g = generate("grid", {"rows": 2, "cols": 2})
    assert g.vertex_count == 4 and g.edge_count == 4
    assert set(g.weights.tolist()) == {1.0}


def test_erdos_renyi_p0_reduces_to_one_vertex():
    g = generate("erdos_renyi", {"n": 10, "p": 0.0}, seed=3)
    assert g.vertex_count == 1 and g.edge_count == 0


def test_grid_3x3_corner_to_corner():
    g = generate("grid", {"rows": 3, "cols": 3})
    assert simple_paths_min(g, 0, 8) == 4.0


FAMILY_PARAMS = {
    "grid": {"rows": 4, "cols": 5},
    "erdos_renyi": {"n": 40, "p": 0.08},
    "barabasi_albert": {"n": 40, "m": 2},
    "watts_strogatz": {"n": 40, "k": 4, "p": 0.2},
    "random_geometric": {"n": 60, "radius": 0.25},
}


@pytest.mark.parametrize("family", FAMILIES)
def test_generate_is_deterministic_connected_and_symmetric(family):
    a = generate(family, FAMILY_PARAMS[family], seed=11)
    b = generate(family, FAMILY_PARAMS[family], seed=11)
    assert a.same_as(b)
    assert a.is_symmetric
    assert np.isfinite(floyd_warshall(a)).all()


def test_random_geometric_uses_euclidean_lengths():
    g = generate("random_geometric", {"n": 50, "radius": 0.3}, seed=2)
    assert g.weights.max() <= 0.3 + 1e-12
    assert not g.has_integer_weights


@pytest.mark.parametrize(
    "family, params",
    [
        ("grid", {"rows": 0, "cols": 3}),
        ("erdos_renyi", {"n": 10, "p": 1.5}),
        ("barabasi_albert", {"n": 5, "m": 5}),
        ("watts_strogatz", {"n": 10, "k": 4, "p": -0.1}),
        ("random_geometric", {"n": 10, "radius": -1}),
        ("hypercube", {"n": 3}),
        ("grid", {"rows": 2, "cols": 2, "depth": 2}),
    ],
)
def test_generate_rejects_bad_parameters(family, params):
    with pytest.raises(ValueError):
        generate(family, params)


def test_generator_spec_parsing():
    assert parse_generator_spec("grid:rows=3,cols=4") == ("grid", {"rows": 3, "cols": 4})
    assert parse_generator_spec("erdos_renyi:n=10,p=0.5") == ("erdos_renyi", {"n": 10, "p": 0.5})


def test_largest_component_keeps_biggest():
    g = Graph.from_arcs(6, [0, 1, 3], [1, 2, 4], [1, 2, 3])
    lcc = largest_component(g)
    assert lcc.vertex_count == 3
    assert sorted(lcc.arcs()) == [(0, 1, 1.0), (1, 0, 1.0), (1, 2, 2.0), (2, 1, 2.0)]


def test_vertex_set_validation():
    with pytest.raises(ValueError):
        VertexSet.of([1, 1], 3)
    with pytest.raises(ValueError):
        VertexSet.of([3], 3)
    vs = VertexSet.of([2, 0], 3)
    assert list(vs) == [2, 0] and 0 in vs and 1 not in vs


def test_induced_subgraph_adjacent_pair():
    view = induced_subgraph(path_graph(3), [0, 1])
    assert view.graph.vertex_count == 2 and view.graph.edge_count == 1


def test_induced_subgraph_nonadjacent_pair():
    view = induced_subgraph(path_graph(3), [0, 2])
    assert view.graph.vertex_count == 2 and view.graph.edge_count == 0


def test_induced_subgraph_grid_row_is_a_path():
    g = generate("grid", {"rows": 3, "cols": 3})
    row = [3, 4, 5]
    expected = sorted((u, v) for u, v, _ in g.arcs() if u in row and v in row)
    view = induced_subgraph(g, row)
    got = sorted((view.host(u), view.host(v)) for u, v, _ in view.graph.arcs())
    assert got == expected == [(3, 4), (4, 3), (4, 5), (5, 4)]


def test_induced_subgraph_rejects_empty():
    with pytest.raises(ValueError):
        induced_subgraph(path_graph(3), [])


@given(small_graphs(min_n=1), st.data())
def test_induced_subgraph_properties(g, data):
    ids = data.draw(st.lists(st.integers(0, g.vertex_count - 1), unique=True, min_size=1))
    view = induced_subgraph(g, ids)
    assert view.graph.arc_count <= g.arc_count
    for s in range(view.graph.vertex_count):
        assert view.sub(view.host(s)) == s
    host = {(u, v): w for u, v, w in g.arcs()}
    for u, v, w in view.graph.arcs():
        assert host[view.host(u), view.host(v)] == w
    inside = set(ids)
    assert view.graph.arc_count == sum(1 for u, v, _ in g.arcs() if u in inside and v in inside)
