"""Preprocessing pipeline and the ALT-vs-ALP path-length benchmark."""

from __future__ import annotations

import io
import logging
import math
import os
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .embedding import AlpIndex, AltIndex, build_alp_index, build_alt_index, index_stats, select_landmarks
from .graph import Graph, generate, load_graph, parse_generator_spec
from .heuristics import AlpHeuristic, AltHeuristic, HeuristicConfig
from .partition import Partition, bfs_regions, louvain, modularity
from .search import astar_query, dijkstra_query
from .verify import distances_agree

log = logging.getLogger(__name__)

ENGINES = ("dijkstra", "alt", "alp")
CSV_COLUMNS = (
    "engine", "bucket_lo", "bucket_hi", "n", "mean_us", "median_us",
    "mean_expanded", "mean_reopened", "index_entries", "index_bytes",
)
DEFAULT_GRAPH = "grid:rows=250,cols=400"
DEFAULT_BUCKETS = tuple(range(1, 502, 50))


@dataclass
class BenchConfig:
    graph: str = DEFAULT_GRAPH  # file path or generator spec "family:key=value,..."
    seed: int = 1
    partitions: int | None = None  # None: Louvain; k: seeded BFS regions
    unweighted_partition: bool = False
    landmark_method: str = "random"
    mode: str = "exact"
    use_ptolemy: bool = True
    keep_directed: bool = False
    query_count: int = 1000
    bucket_edges: tuple = DEFAULT_BUCKETS
    bucket_by: str = "hops"  # or "distance"
    timing: bool = True
    workload_seed: int | None = None

    def __post_init__(self):
        if self.query_count < 1:
            raise ValueError("query_count must be >= 1")
        edges = list(self.bucket_edges)
        if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("bucket edges must be strictly increasing with at least two entries")
        if self.bucket_by not in ("hops", "distance"):
            raise ValueError("bucket_by must be 'hops' or 'distance'")

    @property
    def heuristic_config(self) -> HeuristicConfig:
        return HeuristicConfig(use_ptolemy=self.use_ptolemy)


def load_source(spec: str, seed: int = 0, keep_directed: bool = False) -> Graph:
    """A DIMACS/ALPG file path, or a generator spec such as ``grid:rows=10,cols=10``."""
    if os.path.exists(spec):
        return load_graph(spec, keep_directed=keep_directed)
    family, params = parse_generator_spec(spec)
    return generate(family, params, seed)


@dataclass
class Preprocessed:
    partition: Partition
    landmarks: list[int]
    alt: AltIndex
    alp: AlpIndex
    stats: dict = field(default_factory=dict)


def preprocess(g: Graph, cfg: BenchConfig) -> Preprocessed:
    """Partition, pick one landmark per part, and build both indices on that landmark set."""
    t0 = time.perf_counter()
    if cfg.partitions is None:
        part = louvain(g, seed=cfg.seed, weighted=not cfg.unweighted_partition)
    else:
        part = bfs_regions(g, cfg.partitions, seed=cfg.seed)
    t1 = time.perf_counter()
    landmarks = select_landmarks(g, part, cfg.landmark_method, cfg.seed)
    alp = build_alp_index(g, part, landmarks, cfg.mode)
    alt = build_alt_index(g, landmarks)
    t2 = time.perf_counter()
    log.info("partition: %d parts in %.2fs; indices built in %.2fs", part.community_count, t1 - t0, t2 - t1)
    if alp.unreachable:
        log.warning("%d vertices unreachable from their landmark inside their part", len(alp.unreachable))
    stats = {
        "graph": {"vertices": g.vertex_count, "edges": g.edge_count, "fingerprint": g.fingerprint.hex()},
        "partition": {
            "communities": part.community_count,
            "modularity": round(modularity(g, part), 12) if g.edge_count else None,
        },
        **index_stats(alt, alp),
    }
    return Preprocessed(part, landmarks, alt, alp, stats)


# --- workload -----------------------------------------------------------------------------


def bucket_of(x: float, edges) -> int | None:
    """Index of the half-open bucket holding ``x``; the last bucket is closed."""
    if x < edges[0] or x > edges[-1]:
        return None
    for i in range(len(edges) - 1):
        if x < edges[i + 1]:
            return i
    return len(edges) - 2


def sample_workload(g: Graph, cfg: BenchConfig, max_tries: int = 64) -> list[tuple[int, int, int, float]]:
    """Seeded ``(s, t, bucket, length)`` pairs, buckets filled round-robin.

    For each query a source is drawn uniformly and a bounded Dijkstra ring
    around it supplies targets whose length falls in the wanted bucket. A
    query whose bucket stays empty after ``max_tries`` sources is dropped.
    """
    from scipy.sparse.csgraph import dijkstra

    csr = g.to_scipy()
    edges = list(cfg.bucket_edges)
    nb = len(edges) - 1
    seed = cfg.seed if cfg.workload_seed is None else cfg.workload_seed
    rng = np.random.default_rng([seed, 0x5EED])
    unweighted = cfg.bucket_by == "hops"
    out = []
    for i in range(cfg.query_count):
        b = i % nb
        lo, hi = edges[b], edges[b + 1]
        for _ in range(max_tries):
            s = int(rng.integers(g.vertex_count))
            d = dijkstra(csr, directed=True, indices=s, unweighted=unweighted, limit=hi)
            ok = (d >= lo) & ((d <= hi) if b == nb - 1 else (d < hi))
            cand = np.flatnonzero(ok)
            if len(cand):
                t = int(cand[rng.integers(len(cand))])
                out.append((s, t, b, float(d[t])))
                break
    return out


# --- benchmark ----------------------------------------------------------------------------


@dataclass
class BenchRow:
    engine: str
    bucket_lo: float
    bucket_hi: float
    n: int
    mean_us: float | None
    median_us: float | None
    mean_expanded: float | None
    mean_reopened: float | None
    index_entries: int
    index_bytes: int

    def csv_fields(self) -> list[str]:
        def num(x, fmt):
            return "" if x is None else format(x, fmt)

        return [
            self.engine, _edge(self.bucket_lo), _edge(self.bucket_hi), str(self.n),
            num(self.mean_us, ".3f"), num(self.median_us, ".3f"),
            num(self.mean_expanded, ".3f"), num(self.mean_reopened, ".3f"),
            str(self.index_entries), str(self.index_bytes),
        ]


def _edge(x) -> str:
    return str(int(x)) if float(x) == int(x) else repr(float(x))


def run_bench(g: Graph, pre: Preprocessed, cfg: BenchConfig, workload=None) -> list[BenchRow]:
    """Run every engine on identical pairs; one row per (engine, bucket).

    Raises RuntimeError if the engines ever disagree on a distance.
    """
    if workload is None:
        workload = sample_workload(g, cfg)
    g.neighbors  # build the adjacency lists before anything is timed
    heuristics = {"alt": AltHeuristic(pre.alt), "alp": AlpHeuristic(pre.alp, cfg.heuristic_config)}
    edges = list(cfg.bucket_edges)
    nb = len(edges) - 1
    samples = {(e, b): [] for e in ENGINES for b in range(nb)}
    for s, t, b, _ in workload:
        ref = dijkstra_query(g, s, t)
        samples["dijkstra", b].append(ref.stats)
        for name, h in heuristics.items():
            res = astar_query(g, h, s, t)
            if not distances_agree(res.distance, ref.distance, g.has_integer_weights):
                raise RuntimeError(f"{name} returned {res.distance} for ({s}, {t}); Dijkstra says {ref.distance}")
            samples[name, b].append(res.stats)
    sizes = {
        "dijkstra": (0, 0),
        "alt": (pre.stats["alt"]["entries"], pre.stats["alt"]["bytes"]),
        "alp": (pre.stats["alp"]["entries"], pre.stats["alp"]["bytes"]),
    }
    rows = []
    for e in ENGINES:
        for b in range(nb):
            st = samples[e, b]
            entries, nbytes = sizes[e]
            if not st:
                rows.append(BenchRow(e, edges[b], edges[b + 1], 0, None, None, None, None, entries, nbytes))
                continue
            us = [x.wall_time * 1e6 for x in st]
            rows.append(
                BenchRow(
                    e, edges[b], edges[b + 1], len(st),
                    statistics.fmean(us) if cfg.timing else None,
                    statistics.median(us) if cfg.timing else None,
                    statistics.fmean(x.expanded for x in st),
                    statistics.fmean(x.reopened for x in st),
                    entries, nbytes,
                )
            )
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for r in rows:
        buf.write(",".join(r.csv_fields()) + "\n")
    return buf.getvalue()


def gnuplot_script(csv_name: str, png_name: str = "bench.png", xlabel: str = "shortest-path length (hops)") -> str:
    return (
        'set datafile separator ","\n'
        "set terminal pngcairo size 900,600\n"
        f'set output "{png_name}"\n'
        f'set xlabel "{xlabel}"\n'
        'set ylabel "mean query time (us)"\n'
        "set key left top\n"
        "set logscale y\n"
        f'plot for [e in "{" ".join(ENGINES)}"] "{csv_name}" every ::1 '
        "using ((strcol(1) eq e) ? ($2+$3)/2 : NaN):5 with linespoints title e\n"
    )


# --- heuristic cost scaling ------------------------------------------------------------


class _Recording:
    def __init__(self, inner, log_: list):
        self.inner, self.log = inner, log_

    def bind(self, t):
        ht = self.inner.bind(t)
        seen: list[int] = []
        self.log.append((t, seen))

        def h(v):
            seen.append(v)
            return ht(v)

        return h


def _eval_cost(h, evals, repeats: int) -> float:
    """Best-of-``repeats`` seconds per evaluation replaying the recorded (t, [v...]) calls."""
    count = sum(len(vs) for _, vs in evals)
    best = math.inf
    for _ in range(repeats):
        total = 0.0
        for t, vs in evals:
            ht = h.bind(t)
            start = time.perf_counter()
            for v in vs:
                ht(v)
            total += time.perf_counter() - start
        best = min(best, total)
    return best / max(count, 1)


def heuristic_cost_scaling(g: Graph, ks=(4, 8, 16, 32, 64), seed: int = 0, queries: int = 40,
                           repeats: int = 5, cfg: HeuristicConfig = HeuristicConfig()) -> dict:
    """Time per heuristic evaluation for ALT and ALP as the landmark count grows.

    Each ``k`` partitions ``g`` into ``k`` BFS regions with one random landmark
    each; ALT uses the same ``k`` landmarks. The evaluations A* actually
    requests on a fixed pair set are recorded, then replayed under a timer.
    """
    rng = np.random.default_rng([seed, 0xC057])
    pairs = [tuple(int(x) for x in rng.integers(g.vertex_count, size=2)) for _ in range(queries)]
    out = {"k": list(ks), "alt_ns": [], "alp_ns": [], "alt_evals": [], "alp_evals": []}
    for k in ks:
        part = bfs_regions(g, k, seed=seed)
        lm = select_landmarks(g, part, "random", seed)
        hs = {"alt": AltHeuristic(build_alt_index(g, lm)), "alp": AlpHeuristic(build_alp_index(g, part, lm), cfg)}
        for name, h in hs.items():
            evals: list = []
            rec = _Recording(h, evals)
            n_evals = sum(astar_query(g, rec, s, t).stats.heuristic_evals for s, t in pairs)
            out[f"{name}_evals"].append(n_evals)
            out[f"{name}_ns"].append(_eval_cost(h, evals, repeats) * 1e9)
    out["alt_slope"] = float(np.polyfit(ks, out["alt_ns"], 1)[0])
    out["alp_slope"] = float(np.polyfit(ks, out["alp_ns"], 1)[0])
    return out
