"""Landmark selection and the two competing index structures.

``AltIndex`` keeps a full landmark-to-vertex distance table. ``AlpIndex`` is the
distributed embedding: each vertex stores only its own community's landmark
and the distance to it, plus one landmark-to-landmark distance matrix.
"""

from __future__ import annotations

import heapq
import math
import struct
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import Graph, induced_subgraph
from .partition import Partition

INF = math.inf
ALT_MAGIC = b"ALTX"
ALP_MAGIC = b"ALPX"
INDEX_FORMAT_VERSION = 1
MODES = ("exact", "induced")


def sssp(g: Graph, source: int) -> np.ndarray:
    """Binary-heap Dijkstra from ``source``; ``inf`` marks unreachable vertices."""
    n = g.vertex_count
    if not 0 <= source < n:
        raise IndexError(f"source {source} outside [0, {n})")
    adj = g.neighbors
    dist = [INF] * n
    dist[source] = 0.0
    done = bytearray(n)
    heap = [(0.0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if done[u]:
            continue
        done[u] = 1
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                push(heap, (nd, v))
    return np.array(dist, dtype=np.float64)


def sssp_many(g: Graph, sources: Sequence[int]) -> np.ndarray:
    """``len(sources)`` x ``|V|`` distance rows, computed by scipy's compiled Dijkstra."""
    from scipy.sparse.csgraph import dijkstra

    sources = np.asarray(sources, dtype=np.int64)
    if len(sources) == 0:
        return np.zeros((0, g.vertex_count))
    return np.asarray(dijkstra(g.to_scipy(), directed=True, indices=sources), dtype=np.float64).reshape(
        len(sources), g.vertex_count
    )


def select_landmarks(g: Graph, p: Partition, method: str = "random", seed: int = 0) -> list[int]:
    """One landmark per community, in community-id order.

    ``random`` draws uniformly from each community. ``farthest`` starts at the
    community's lowest vertex id and takes the member farthest from it inside
    the induced subgraph; the seed breaks ties among equally far members.
    Unreachable members never win.
    """
    if p.vertex_count != g.vertex_count:
        raise ValueError("partition does not cover the graph")
    rng = np.random.default_rng(seed)
    out = []
    for comm in p.communities:
        members = np.sort(comm.ids)
        if method == "random":
            out.append(int(members[rng.integers(len(members))]))
        elif method == "farthest":
            view = induced_subgraph(g, members)
            dist = sssp(view.graph, 0)
            dist[~np.isfinite(dist)] = -1.0
            far = np.flatnonzero(dist == dist.max())
            out.append(int(view.to_host[far[rng.integers(len(far))]]))
        else:
            raise ValueError(f"unknown landmark method {method!r}")
    return out


# --- ALT ---------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AltIndex:
    landmarks: np.ndarray
    dist_table: np.ndarray  # |L| x |V|
    fingerprint: bytes = b""
    by_vertex: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        # C-contiguous |V| x |L| view of the same numbers; per-vertex rows for evaluation
        object.__setattr__(self, "by_vertex", np.ascontiguousarray(self.dist_table.T))
        for arr in (self.landmarks, self.dist_table, self.by_vertex):
            arr.flags.writeable = False

    @property
    def landmark_count(self) -> int:
        return len(self.landmarks)

    @property
    def vertex_count(self) -> int:
        return self.dist_table.shape[1]

    @property
    def entry_count(self) -> int:
        return int(self.dist_table.size)

    @property
    def has_infinite(self) -> bool:
        return not bool(np.isfinite(self.dist_table).all())


def build_alt_index(g: Graph, landmarks: Sequence[int]) -> AltIndex:
    lm = np.asarray(landmarks, dtype=np.int64).ravel()
    if len(np.unique(lm)) != len(lm):
        raise ValueError("duplicate landmark ids")
    if len(lm) and (lm.min() < 0 or lm.max() >= g.vertex_count):
        raise ValueError("landmark outside the graph")
    table = sssp_many(g, lm)
    return AltIndex(lm, table, g.fingerprint)


# --- ALP (distributed embedding) -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlpIndex:
    landmarks: np.ndarray  # one per community, community-id order
    label_landmark: np.ndarray  # per vertex: ordinal of its community's landmark
    label_dist: np.ndarray  # per vertex: distance to that landmark
    landmark_matrix: np.ndarray  # |L| x |L|
    mode: str = "exact"
    fingerprint: bytes = b""
    unreachable: tuple = ()  # vertices their landmark could not reach (induced mode)

    def __post_init__(self):
        for arr in (self.landmarks, self.label_landmark, self.label_dist, self.landmark_matrix):
            arr.flags.writeable = False

    @property
    def landmark_count(self) -> int:
        return len(self.landmarks)

    @property
    def vertex_count(self) -> int:
        return len(self.label_dist)

    @property
    def entry_count(self) -> int:
        """Labels plus matrix entries, |V| + |L|^2."""
        return len(self.label_dist) + int(self.landmark_matrix.size)

    @property
    def has_infinite(self) -> bool:
        return not (np.isfinite(self.label_dist).all() and np.isfinite(self.landmark_matrix).all())


def build_alp_index(g: Graph, p: Partition, landmarks: Sequence[int], mode: str = "exact") -> AlpIndex:
    """Distributed embedding over partition ``p`` with ``landmarks[i]`` in community ``i``.

    ``induced`` labels come from Dijkstra inside each community's induced
    subgraph; ``exact`` labels from full-graph Dijkstra, keeping only the
    landmark's own community. Both store the same |V| + |L|^2 numbers.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not g.is_symmetric:
        raise ValueError("distributed embedding needs a symmetric graph (asymmetric input is unsupported)")
    if p.vertex_count != g.vertex_count:
        raise ValueError("partition does not cover the graph")
    lm = np.asarray(landmarks, dtype=np.int64).ravel()
    if len(lm) != p.community_count:
        raise ValueError("need exactly one landmark per community")
    if len(lm) and not np.array_equal(p.assignment[lm], np.arange(len(lm))):
        raise ValueError("landmarks[i] must belong to community i")

    rows = sssp_many(g, lm)  # full-graph distances from each landmark
    # the two directions are summed in different orders; keep the smaller so the matrix is symmetric
    matrix = rows[:, lm]
    matrix = np.ascontiguousarray(np.minimum(matrix, matrix.T))
    label_landmark = p.assignment.astype(np.int32)
    if mode == "exact":
        label_dist = rows[label_landmark, np.arange(g.vertex_count)]
    else:
        label_dist = np.full(g.vertex_count, INF)
        for c, comm in enumerate(p.communities):
            view = induced_subgraph(g, comm)
            label_dist[view.to_host] = sssp(view.graph, view.sub(int(lm[c])))
    unreachable = tuple(np.flatnonzero(~np.isfinite(label_dist)).tolist())
    return AlpIndex(lm, label_landmark, np.ascontiguousarray(label_dist), matrix, mode, g.fingerprint, unreachable)


# --- serialization -------------------------------------------------------------------------

_ALT_HEAD = struct.Struct("<4sI32sQQ")
_ALP_HEAD = struct.Struct("<4sI32sBQQ")


def alt_to_bytes(idx: AltIndex) -> bytes:
    head = _ALT_HEAD.pack(ALT_MAGIC, INDEX_FORMAT_VERSION, idx.fingerprint, idx.landmark_count, idx.vertex_count)
    return head + idx.landmarks.astype("<i8").tobytes() + idx.dist_table.astype("<f8").tobytes()


def alp_to_bytes(idx: AlpIndex) -> bytes:
    head = _ALP_HEAD.pack(
        ALP_MAGIC, INDEX_FORMAT_VERSION, idx.fingerprint, MODES.index(idx.mode), idx.landmark_count, idx.vertex_count
    )
    return b"".join(
        [
            head,
            idx.landmarks.astype("<i8").tobytes(),
            idx.label_landmark.astype("<i4").tobytes(),
            idx.label_dist.astype("<f8").tobytes(),
            idx.landmark_matrix.astype("<f8").tobytes(),
        ]
    )


def _check_head(data: bytes, head: struct.Struct, magic: bytes):
    if len(data) < head.size or data[:4] != magic:
        raise ValueError(f"not a {magic.decode()} index")
    fields = head.unpack_from(data)
    if fields[1] != INDEX_FORMAT_VERSION:
        raise ValueError(f"unsupported index version {fields[1]}")
    return fields


def alt_from_bytes(data: bytes) -> AltIndex:
    _, _, fp, k, n = _check_head(data, _ALT_HEAD, ALT_MAGIC)
    if len(data) != _ALT_HEAD.size + 8 * k + 8 * k * n:
        raise ValueError("ALT index has the wrong length")
    pos = _ALT_HEAD.size
    lm = np.frombuffer(data, "<i8", k, pos).astype(np.int64)
    table = np.frombuffer(data, "<f8", k * n, pos + 8 * k).astype(np.float64).reshape(k, n)
    return AltIndex(lm, table, fp)


def alp_from_bytes(data: bytes) -> AlpIndex:
    _, _, fp, mode, k, n = _check_head(data, _ALP_HEAD, ALP_MAGIC)
    if len(data) != _ALP_HEAD.size + 8 * k + 12 * n + 8 * k * k:
        raise ValueError("ALP index has the wrong length")
    pos = _ALP_HEAD.size
    lm = np.frombuffer(data, "<i8", k, pos).astype(np.int64)
    pos += 8 * k
    ll = np.frombuffer(data, "<i4", n, pos).astype(np.int32)
    pos += 4 * n
    ld = np.frombuffer(data, "<f8", n, pos).astype(np.float64)
    pos += 8 * n
    mat = np.frombuffer(data, "<f8", k * k, pos).astype(np.float64).reshape(k, k)
    unreachable = tuple(np.flatnonzero(~np.isfinite(ld)).tolist())
    return AlpIndex(lm, ll, ld, mat, MODES[mode], fp, unreachable)


def index_stats(alt: AltIndex | None, alp: AlpIndex | None) -> dict:
    """Entry counts and serialized sizes for the space comparison."""
    out: dict = {}
    if alt is not None:
        out["alt"] = {
            "landmarks": alt.landmark_count,
            "vertices": alt.vertex_count,
            "entries": alt.entry_count,
            "bytes": len(alt_to_bytes(alt)),
        }
    if alp is not None:
        out["alp"] = {
            "landmarks": alp.landmark_count,
            "vertices": alp.vertex_count,
            "entries": alp.entry_count,
            "bytes": len(alp_to_bytes(alp)),
            "mode": alp.mode,
            "unreachable_labels": len(alp.unreachable),
        }
    return out
