"""Command-line entry point: ``alp {generate,preprocess,query,bench,verify,stats}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import embedding as emb
from .bench import (
    DEFAULT_BUCKETS, DEFAULT_GRAPH, BenchConfig, gnuplot_script, load_source, preprocess, rows_to_csv, run_bench,
)
from .graph import generate, graph_to_bytes, parse_generator_spec, to_dimacs
from .heuristics import AlpHeuristic, AltHeuristic, HeuristicConfig
from .partition import read_partition, write_partition
from .search import astar_query, dijkstra_query

EXIT_UNREACHABLE = 3

log = logging.getLogger("alp")


def _on_off(s: str) -> bool:
    if s not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return s == "on"


def _buckets(s: str) -> tuple:
    """``lo:hi:step`` or a comma list of edges."""
    if ":" in s:
        lo, hi, step = (int(x) for x in s.split(":"))
        edges = list(range(lo, hi + 1, step))
        if edges[-1] != hi:
            edges.append(hi)
        return tuple(edges)
    return tuple(float(x) if "." in x else int(x) for x in s.split(","))


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=1, help="seed for generation, partitioning, landmarks and workload")
    p.add_argument("--mode", choices=emb.MODES, default="exact", help="how ALP labels are computed")
    p.add_argument("--ptolemy", type=_on_off, default=True, metavar="on|off", help="use the Ptolemy bound")
    p.add_argument("--keep-directed", action="store_true", help="do not symmetrize DIMACS arcs")
    p.add_argument("-v", "--verbose", action="store_true")


def _graph_opts(p: argparse.ArgumentParser, default: str | None = DEFAULT_GRAPH):
    p.add_argument("--graph", default=default, required=default is None,
                   help="DIMACS .gr / ALPG file, or generator spec like 'grid:rows=10,cols=10'")


def _partition_opts(p: argparse.ArgumentParser):
    p.add_argument("--partitions", type=int, default=None, metavar="K",
                   help="K seeded BFS regions instead of Louvain")
    p.add_argument("--unweighted-partition", action="store_true", help="run Louvain on hop counts")
    p.add_argument("--landmarks", choices=("random", "farthest"), default="random")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alp", description="ALT and dual-landmark ALP shortest-path toolkit")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("generate", help="write a synthetic graph")
    _common(p)
    p.add_argument("spec", help="family:key=value,... e.g. grid:rows=10,cols=10")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--format", choices=("dimacs", "binary"), default=None,
                   help="defaults to binary for .alpg, DIMACS otherwise")

    p = sub.add_parser("preprocess", help="partition, select landmarks, build both indices")
    _common(p)
    _graph_opts(p)
    _partition_opts(p)
    p.add_argument("-o", "--out", required=True, help="output directory")

    p = sub.add_parser("query", help="answer one shortest-path query (0-based vertex ids)")
    _common(p)
    _graph_opts(p)
    p.add_argument("--index-dir", required=True)
    p.add_argument("--engine", choices=("dijkstra", "alt", "alp"), default="alp")
    p.add_argument("source", type=int)
    p.add_argument("target", type=int)

    p = sub.add_parser("bench", help="ALT vs ALP vs Dijkstra by path-length bucket")
    _common(p)
    _graph_opts(p)
    _partition_opts(p)
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--buckets", type=_buckets, default=DEFAULT_BUCKETS, help="lo:hi:step or e1,e2,...")
    p.add_argument("--bucket-by", choices=("hops", "distance"), default="hops")
    p.add_argument("--timing", type=_on_off, default=True, metavar="on|off",
                   help="off leaves the time columns blank so the CSV is reproducible byte for byte")
    p.add_argument("--workload-seed", type=int, default=None)
    p.add_argument("-o", "--out", default="bench.csv")
    p.add_argument("--plot", default=None, help="gnuplot script path (default: <out>.gp)")
    p.add_argument("--stats-out", default=None, help="also write preprocessing stats as JSON")

    p = sub.add_parser("verify", help="admissibility, consistency and dominance checks")
    _common(p)
    p.add_argument("--sweep", type=int, default=200, help="graphs in the admissibility sweep")
    p.add_argument("--max-n", type=int, default=200)
    p.add_argument("--trials", type=int, default=10_000, help="trial budget for each witness search")
    p.add_argument("--reports", default=None, help="write line-delimited JSON reports here")

    p = sub.add_parser("stats", help="entry counts and bytes of built indices")
    _common(p)
    p.add_argument("--index-dir", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.cmd](args)
    except (OSError, ValueError) as exc:
        print(f"alp {args.cmd}: error: {exc}", file=sys.stderr)
        return 1


def _write(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode()
    path.write_bytes(data)


def cmd_generate(args) -> int:
    family, params = parse_generator_spec(args.spec)
    g = generate(family, params, args.seed)
    fmt = args.format or ("binary" if args.out.endswith(".alpg") else "dimacs")
    if fmt == "binary":
        _write(args.out, graph_to_bytes(g))
    else:
        _write(args.out, to_dimacs(g, comment=f"{args.spec} seed={args.seed}"))
    print(f"{g.vertex_count} vertices, {g.edge_count} edges -> {args.out}")
    return 0


def _config(args, **extra) -> BenchConfig:
    return BenchConfig(
        graph=args.graph, seed=args.seed, partitions=args.partitions,
        unweighted_partition=args.unweighted_partition, landmark_method=args.landmarks,
        mode=args.mode, use_ptolemy=args.ptolemy, keep_directed=args.keep_directed, **extra,
    )


def cmd_preprocess(args) -> int:
    cfg = _config(args)
    g = load_source(cfg.graph, cfg.seed, cfg.keep_directed)
    pre = preprocess(g, cfg)
    out = Path(args.out)
    _write(out / "alt.idx", emb.alt_to_bytes(pre.alt))
    _write(out / "alp.idx", emb.alp_to_bytes(pre.alp))
    _write(out / "partition.txt", write_partition(pre.partition))
    _write(out / "stats.json", json.dumps(pre.stats, indent=2, sort_keys=True) + "\n")
    print(json.dumps(pre.stats, indent=2, sort_keys=True))
    return 0


def _fmt(d: float) -> str:
    return str(int(d)) if d == int(d) else repr(d)


def cmd_query(args) -> int:
    g = load_source(args.graph, args.seed, args.keep_directed)
    d = Path(args.index_dir)
    if args.engine == "dijkstra":
        res = dijkstra_query(g, args.source, args.target)
    else:
        if args.engine == "alt":
            idx = emb.alt_from_bytes((d / "alt.idx").read_bytes())
            h = AltHeuristic(idx)
        else:
            idx = emb.alp_from_bytes((d / "alp.idx").read_bytes())
            h = AlpHeuristic(idx, HeuristicConfig(use_ptolemy=args.ptolemy))
        if idx.fingerprint != g.fingerprint:
            print("alp query: error: index was built for a different graph (fingerprint mismatch)", file=sys.stderr)
            return 1
        res = astar_query(g, h, args.source, args.target)
    st = res.stats
    print(f"distance: {_fmt(res.distance) if res.reachable else 'unreachable'}")
    print("path: " + " ".join(map(str, res.path)))
    print(f"expanded: {st.expanded} reopened: {st.reopened} heap_pushes: {st.heap_pushes} "
          f"heuristic_evals: {st.heuristic_evals}")
    log.info("wall time %.1f us", st.wall_time * 1e6)
    return 0 if res.reachable else EXIT_UNREACHABLE


def cmd_bench(args) -> int:
    cfg = _config(args, query_count=args.queries, bucket_edges=args.buckets, bucket_by=args.bucket_by,
                  timing=args.timing, workload_seed=args.workload_seed)
    g = load_source(cfg.graph, cfg.seed, cfg.keep_directed)
    pre = preprocess(g, cfg)
    rows = run_bench(g, pre, cfg)
    _write(args.out, rows_to_csv(rows))
    plot = args.plot or str(Path(args.out).with_suffix(".gp"))
    xlabel = "shortest-path length (hops)" if cfg.bucket_by == "hops" else "shortest-path distance"
    _write(plot, gnuplot_script(Path(args.out).name, Path(args.out).with_suffix(".png").name, xlabel))
    if args.stats_out:
        _write(args.stats_out, json.dumps(pre.stats, indent=2, sort_keys=True) + "\n")
    print(f"{sum(r.n for r in rows if r.engine == 'dijkstra')} queries, "
          f"{pre.partition.community_count} landmarks -> {args.out}, {plot}")
    return 0


def cmd_verify(args) -> int:
    from . import verify as vf

    lines: list[str] = []
    reports: list = []
    failed = False

    def say(s):
        lines.append(s)
        print(s, flush=True)

    exact = vf.sweep_scenarios(args.sweep, args.seed, max_n=args.max_n, mode="exact", use_ptolemy=False)
    summ, reps = vf.admissibility_sweep(exact, "alt")
    n_alt = sum(s.violations for s in summ.values())
    say(f"admissibility alt: {n_alt} violations")
    failed |= n_alt > 0
    reports += reps

    summ, reps = vf.admissibility_sweep(exact, "alp")
    n_alp = sum(s.violations for s in summ.values())
    say(f"admissibility alp exact ptolemy=off: {n_alp} violations")
    if args.mode == "exact":
        failed |= n_alp > 0
        say(f"admissibility: {n_alt + n_alp} violations")
    reports += reps

    if args.ptolemy:
        with_p = [vf.Scenario(**{**s.to_dict(), "use_ptolemy": True}) for s in exact]
        summ, reps = vf.admissibility_sweep(with_p, "alp")
        reports += reps
        for fam, s in summ.items():
            say(f"admissibility alp exact ptolemy=on {fam}: {s.violations}/{s.pairs} violations")
        excluded = sorted(f for f, c in vf.ptolemy_config(summ).items() if not c.use_ptolemy)
        say("ptolemy bound excluded for: " + (", ".join(excluded) if excluded else "none"))

    induced = [vf.Scenario(**{**s.to_dict(), "mode": "induced"}) for s in exact]
    summ, reps = vf.admissibility_sweep(induced, "alp")
    reports += reps
    for fam, s in summ.items():
        say(f"admissibility alp induced {fam}: rate {s.rate:.6f} ({s.violations}/{s.pairs}, informational)")

    found, used = vf.find_consistency_witness(args.trials, args.seed, mode="exact", use_ptolemy=args.ptolemy)
    if found:
        w = found[0]
        say(f"consistency: witness found after {used} trials: edge ({w.witness[0]}, {w.witness[1]}) "
            f"target {w.witness[2]} h_u={w.values['h_u']!r} w={w.values['w']!r} h_v={w.values['h_v']!r}")
        say("witness: " + w.to_json())
    else:
        say(f"consistency: inconclusive, no witness in {used} trials")
    reports += found

    l_dl, dl_l = vf.find_dominance_counterexamples(args.trials, args.seed, use_ptolemy=args.ptolemy)
    for name, found in (("alt over alp (same landmarks)", l_dl), ("alp over alt (different landmarks)", dl_l)):
        say(f"dominance {name}: " + (f"{len(found)} witness(es)" if found else "inconclusive"))
    reports += l_dl + dl_l

    if args.reports:
        _write(args.reports, vf.write_reports(reports))
    say("verify: FAIL" if failed else "verify: ok")
    return 1 if failed else 0


def cmd_stats(args) -> int:
    d = Path(args.index_dir)
    alt = emb.alt_from_bytes((d / "alt.idx").read_bytes()) if (d / "alt.idx").exists() else None
    alp = emb.alp_from_bytes((d / "alp.idx").read_bytes()) if (d / "alp.idx").exists() else None
    stats = emb.index_stats(alt, alp)
    if (d / "partition.txt").exists():
        stats["partition"] = {"communities": read_partition((d / "partition.txt").read_text()).community_count}
    print(json.dumps(stats, indent=2, sort_keys=True))
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "preprocess": cmd_preprocess,
    "query": cmd_query,
    "bench": cmd_bench,
    "verify": cmd_verify,
    "stats": cmd_stats,
}


if __name__ == "__main__":
    sys.exit(main())
