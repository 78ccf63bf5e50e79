"""Desk-scale benchmark: 10^3 queries on a 10^5-vertex grid, ALT vs ALP vs Dijkstra.

    python scripts/run_bench.py --out results/
    gnuplot results/bench.gp   # renders results/bench.png

Any ``alp bench`` flag can be appended after ``--``.
"""

import argparse
import sys
from pathlib import Path

from alp.cli import main as alp_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--graph", default="grid:rows=250,cols=400")
    ap.add_argument("--queries", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("extra", nargs="*")
    args = ap.parse_args()
    out = Path(args.out)
    return alp_main([
        "bench", "--graph", args.graph, "--queries", str(args.queries), "--seed", str(args.seed),
        "--buckets", "1:501:50", "-o", str(out / "bench.csv"), "--stats-out", str(out / "stats.json"), "-v",
        *args.extra,
    ])


if __name__ == "__main__":
    sys.exit(main())
