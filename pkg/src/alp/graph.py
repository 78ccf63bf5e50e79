"""Immutable CSR graphs, DIMACS ingestion, synthetic families and induced subgraphs."""

from __future__ import annotations

import hashlib
import io
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

GRAPH_MAGIC = b"ALPG"
GRAPH_FORMAT_VERSION = 1

FAMILIES = ("grid", "erdos_renyi", "barabasi_albert", "watts_strogatz", "random_geometric")


class GraphFormatError(ValueError):
    """Malformed DIMACS input. ``lineno`` is 1-based, or None when not tied to a line."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class VertexRangeError(GraphFormatError):
    pass


class NegativeWeightError(GraphFormatError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted graph in compressed sparse row form.

    ``offsets[v]:offsets[v+1]`` indexes the outgoing arcs of ``v`` in
    ``targets``/``weights``. A symmetric graph stores every undirected edge as
    two arcs; a self-loop is a single arc.
    """

    offsets: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    is_symmetric: bool

    def __post_init__(self):
        for arr in (self.offsets, self.targets, self.weights):
            arr.flags.writeable = False

    @classmethod
    def from_arcs(cls, n: int, src, dst, w, symmetrize: bool = True) -> "Graph":
        """Build from parallel arc arrays.

        With ``symmetrize`` every arc is mirrored and parallel arcs collapse to
        their minimum weight. Otherwise the arc multiset is stored unchanged.
        """
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        w = np.asarray(w, dtype=np.float64).ravel()
        if not (len(src) == len(dst) == len(w)):
            raise ValueError("arc arrays differ in length")
        if len(src) and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ValueError("arc endpoint outside [0, n)")
        if len(w) and (np.isnan(w).any() or w.min() < 0):
            raise ValueError("edge weights must be nonnegative")
        if symmetrize:
            src, dst, w = (np.concatenate([src, dst]), np.concatenate([dst, src]), np.concatenate([w, w]))
        order = np.lexsort((w, dst, src))
        src, dst, w = src[order], dst[order], w[order]
        if symmetrize and len(src):
            keep = np.ones(len(src), dtype=bool)
            keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            src, dst, w = src[keep], dst[keep], w[keep]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
        symmetric = True if symmetrize else _arcs_symmetric(src, dst, w)
        return cls(offsets, dst.astype(np.int64), w, symmetric)

    @property
    def vertex_count(self) -> int:
        return len(self.offsets) - 1

    @property
    def arc_count(self) -> int:
        return len(self.targets)

    @property
    def edge_count(self) -> int:
        """Undirected edges for symmetric graphs (loops count once), arcs otherwise."""
        if not self.is_symmetric:
            return self.arc_count
        loops = int(np.count_nonzero(self.sources == self.targets))
        return (self.arc_count - loops) // 2 + loops

    @cached_property
    def sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.vertex_count, dtype=np.int64), np.diff(self.offsets))

    @cached_property
    def neighbors(self) -> list[list[tuple[int, float]]]:
        """Per-vertex ``(target, weight)`` lists for the pure-Python search loops."""
        t = self.targets.tolist()
        w = self.weights.tolist()
        off = self.offsets.tolist()
        return [list(zip(t[off[v]:off[v + 1]], w[off[v]:off[v + 1]])) for v in range(self.vertex_count)]

    @cached_property
    def has_integer_weights(self) -> bool:
        return bool(np.all(self.weights == np.round(self.weights)))

    @cached_property
    def fingerprint(self) -> bytes:
        """SHA-256 over the CSR arrays; ties index files to the graph they were built on."""
        h = hashlib.sha256()
        h.update(self.offsets.astype("<i8").tobytes())
        h.update(self.targets.astype("<i8").tobytes())
        h.update(self.weights.astype("<f8").tobytes())
        return h.digest()

    def to_scipy(self):
        import scipy.sparse as sp

        n = self.vertex_count
        return sp.csr_matrix((self.weights, self.targets, self.offsets), shape=(n, n))

    def arcs(self) -> Iterable[tuple[int, int, float]]:
        return zip(self.sources.tolist(), self.targets.tolist(), self.weights.tolist())

    def same_as(self, other: "Graph") -> bool:
        return (
            self.is_symmetric == other.is_symmetric
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.targets, other.targets)
            and np.array_equal(self.weights, other.weights)
        )


def _arcs_symmetric(src, dst, w) -> bool:
    fwd = np.lexsort((w, dst, src))
    rev = np.lexsort((w, src, dst))
    return bool(
        np.array_equal(src[fwd], dst[rev]) and np.array_equal(dst[fwd], src[rev]) and np.array_equal(w[fwd], w[rev])
    )


# --- vertex sets and induced subgraphs -------------------------------------------------


@dataclass(frozen=True, eq=False)
class VertexSet:
    ids: np.ndarray
    member: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, ids: Sequence[int], vertex_count: int) -> "VertexSet":
        arr = np.asarray(ids, dtype=np.int64).ravel()
        if len(arr) and (arr.min() < 0 or arr.max() >= vertex_count):
            raise ValueError("vertex id outside the host graph")
        member = np.zeros(vertex_count, dtype=bool)
        member[arr] = True
        if int(member.sum()) != len(arr):
            raise ValueError("duplicate vertex ids")
        arr.flags.writeable = False
        member.flags.writeable = False
        return cls(arr, member)

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < len(self.member) and bool(self.member[v])

    def __iter__(self):
        return iter(self.ids.tolist())


@dataclass(frozen=True, eq=False)
class SubgraphView:
    graph: Graph
    to_host: np.ndarray
    host_to_sub: np.ndarray  # -1 for host vertices outside the view

    def host(self, sub_id: int) -> int:
        return int(self.to_host[sub_id])

    def sub(self, host_id: int) -> int:
        s = int(self.host_to_sub[host_id])
        if s < 0:
            raise KeyError(host_id)
        return s


def induced_subgraph(g: Graph, s: VertexSet | Sequence[int]) -> SubgraphView:
    if not isinstance(s, VertexSet):
        s = VertexSet.of(s, g.vertex_count)
    if len(s) == 0:
        raise ValueError("induced subgraph of an empty vertex set")
    host_to_sub = np.full(g.vertex_count, -1, dtype=np.int64)
    host_to_sub[s.ids] = np.arange(len(s), dtype=np.int64)
    src, dst = g.sources, g.targets
    keep = s.member[src] & s.member[dst]
    sub = Graph.from_arcs(len(s), host_to_sub[src[keep]], host_to_sub[dst[keep]], g.weights[keep], symmetrize=False)
    if g.is_symmetric and not sub.is_symmetric:  # pragma: no cover - restriction preserves symmetry
        raise AssertionError("induced subgraph lost symmetry")
    to_host = s.ids.copy()
    to_host.flags.writeable = False
    host_to_sub.flags.writeable = False
    return SubgraphView(sub, to_host, host_to_sub)


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest (weakly) connected component, ids kept in host order."""
    from scipy.sparse.csgraph import connected_components

    if g.vertex_count == 0:
        return g
    _, labels = connected_components(g.to_scipy(), directed=True, connection="weak")
    sizes = np.bincount(labels)
    biggest = int(np.argmax(sizes))  # lowest label on ties; labels follow vertex order
    if sizes[biggest] == g.vertex_count:
        return g
    view = induced_subgraph(g, np.flatnonzero(labels == biggest))
    return view.graph


# --- DIMACS ----------------------------------------------------------------------------


def _lines(source) -> Iterable[str]:
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("ascii")
    if isinstance(source, str):
        return source.splitlines()
    return (ln.decode("ascii") if isinstance(ln, bytes) else ln for ln in source)


def _number(tok: str, lineno: int) -> float:
    try:
        return int(tok)
    except ValueError:
        try:
            return float(tok)
        except ValueError:
            raise GraphFormatError(f"bad weight {tok!r}", lineno) from None


def parse_dimacs(source, symmetrize: bool = True) -> Graph:
    """Parse a DIMACS shortest-path ``.gr`` stream (bytes, str, or file of lines).

    Vertex ids are 1-based in the file and 0-based in the result. Real-valued
    weights are accepted in addition to the integers the format prescribes.
    """
    n = m = None
    src: list[int] = []
    dst: list[int] = []
    wts: list[float] = []
    lineno = 0
    for lineno, raw in enumerate(_lines(source), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("second problem line", lineno)
            if len(parts) != 4 or parts[1] != "sp":
                raise GraphFormatError("expected 'p sp <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError("non-integer problem size", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("negative problem size", lineno)
        elif tag == "a":
            if n is None:
                raise GraphFormatError("arc before problem line", lineno)
            if len(parts) != 4:
                raise GraphFormatError("expected 'a <u> <v> <w>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError("non-integer vertex id", lineno) from None
            w = _number(parts[3], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise VertexRangeError(f"vertex id outside [1, {n}]", lineno)
            if w < 0:
                raise NegativeWeightError(f"negative weight {w}", lineno)
            src.append(u - 1)
            dst.append(v - 1)
            wts.append(w)
        else:
            raise GraphFormatError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing problem line")
    if len(src) != m:
        raise GraphFormatError(f"problem line declares {m} arcs, found {len(src)}", lineno)
    return Graph.from_arcs(n, src, dst, wts, symmetrize=symmetrize)


def to_dimacs(g: Graph, comment: str | None = None) -> str:
    """Serialize every stored arc; ``parse_dimacs`` of the result rebuilds ``g``."""
    out = io.StringIO()
    if comment:
        for line in comment.splitlines():
            out.write(f"c {line}\n")
    out.write(f"p sp {g.vertex_count} {g.arc_count}\n")
    for u, v, w in g.arcs():
        ws = str(int(w)) if w == int(w) else repr(w)
        out.write(f"a {u + 1} {v + 1} {ws}\n")
    return out.getvalue()


def load_graph(path, keep_directed: bool = False) -> Graph:
    """Load a ``.gr`` DIMACS file or an ``ALPG`` binary cache (detected by magic)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == GRAPH_MAGIC:
        return graph_from_bytes(data)
    return parse_dimacs(data, symmetrize=not keep_directed)


# --- binary cache ----------------------------------------------------------------------

_HEADER = struct.Struct("<4sIQQ")


def graph_to_bytes(g: Graph) -> bytes:
    head = _HEADER.pack(GRAPH_MAGIC, GRAPH_FORMAT_VERSION, g.vertex_count, g.arc_count)
    return b"".join(
        [head, g.offsets.astype("<i8").tobytes(), g.targets.astype("<i8").tobytes(), g.weights.astype("<f8").tobytes()]
    )


def graph_from_bytes(data: bytes) -> Graph:
    if len(data) < _HEADER.size:
        raise GraphFormatError("truncated graph cache")
    magic, version, n, m = _HEADER.unpack_from(data)
    if magic != GRAPH_MAGIC:
        raise GraphFormatError("not an ALPG graph cache")
    if version != GRAPH_FORMAT_VERSION:
        raise GraphFormatError(f"unsupported graph cache version {version}")
    expected = _HEADER.size + 8 * (n + 1) + 16 * m
    if len(data) != expected:
        raise GraphFormatError(f"graph cache is {len(data)} bytes, expected {expected}")
    pos = _HEADER.size
    offsets = np.frombuffer(data, "<i8", n + 1, pos).astype(np.int64)
    pos += 8 * (n + 1)
    targets = np.frombuffer(data, "<i8", m, pos).astype(np.int64)
    pos += 8 * m
    weights = np.frombuffer(data, "<f8", m, pos).astype(np.float64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(offsets))
    return Graph(offsets, targets, weights, _arcs_symmetric(src, targets, weights))


# --- synthetic families ----------------------------------------------------------------


def _require(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def generate(family: str, params: dict, seed: int = 0) -> Graph:
    """Seeded synthetic graph, reduced to its largest connected component.

    Families and parameters:
      grid(rows, cols); erdos_renyi(n, p); barabasi_albert(n, m);
      watts_strogatz(n, k, p); random_geometric(n, radius).
    All but ``random_geometric`` carry unit weights; that family uses
    Euclidean edge lengths in the unit square.
    """
    import networkx as nx

    p = dict(params)
    if family == "grid":
        rows, cols = int(p.pop("rows")), int(p.pop("cols"))
        _require(rows >= 1 and cols >= 1, "grid dimensions must be >= 1")
        r, c = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
        ids = (r * cols + c).ravel()
        right = ids.reshape(rows, cols)[:, :-1].ravel()
        down = ids.reshape(rows, cols)[:-1, :].ravel()
        src = np.concatenate([right, down])
        dst = np.concatenate([right + 1, down + cols])
        _no_extra(p, family)
        return Graph.from_arcs(rows * cols, src, dst, np.ones(len(src)))
    if family == "erdos_renyi":
        n, prob = int(p.pop("n")), float(p.pop("p"))
        _require(n >= 1, "n must be >= 1")
        _require(0.0 <= prob <= 1.0, "p must lie in [0, 1]")
        _no_extra(p, family)
        nxg = nx.gnp_random_graph(n, prob, seed=seed)
    elif family == "barabasi_albert":
        n, m = int(p.pop("n")), int(p.pop("m"))
        _require(1 <= m < n, "barabasi_albert needs 1 <= m < n")
        _no_extra(p, family)
        nxg = nx.barabasi_albert_graph(n, m, seed=seed)
    elif family == "watts_strogatz":
        n, k, prob = int(p.pop("n")), int(p.pop("k")), float(p.pop("p"))
        _require(n >= 1 and 0 <= k < n, "watts_strogatz needs 0 <= k < n")
        _require(0.0 <= prob <= 1.0, "p must lie in [0, 1]")
        _no_extra(p, family)
        nxg = nx.watts_strogatz_graph(n, k, prob, seed=seed)
    elif family == "random_geometric":
        n, radius = int(p.pop("n")), float(p.pop("radius"))
        _require(n >= 1, "n must be >= 1")
        _require(radius >= 0, "radius must be >= 0")
        _no_extra(p, family)
        nxg = nx.random_geometric_graph(n, radius, seed=seed)
    else:
        raise ValueError(f"unknown graph family {family!r}; expected one of {FAMILIES}")

    n = nxg.number_of_nodes()
    edges = sorted((min(u, v), max(u, v)) for u, v in nxg.edges())
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    if family == "random_geometric":
        pos = np.array([nxg.nodes[v]["pos"] for v in range(n)], dtype=np.float64).reshape(n, 2)
        w = np.hypot(*(pos[src] - pos[dst]).T) if len(src) else np.zeros(0)
    else:
        w = np.ones(len(src))
    return largest_component(Graph.from_arcs(n, src, dst, w))


def _no_extra(p: dict, family: str):
    if p:
        raise ValueError(f"unexpected {family} parameters: {sorted(p)}")


def parse_generator_spec(spec: str) -> tuple[str, dict]:
    """``"grid:rows=3,cols=4"`` -> ``("grid", {"rows": 3, "cols": 4})``."""
    family, _, rest = spec.partition(":")
    params: dict = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad generator parameter {item!r}")
        num = float(val)
        params[key.strip()] = int(num) if num == int(num) and "." not in val else num
    return family.strip(), params
