"""Per-evaluation heuristic cost as the landmark count grows (ALT linear, ALP flat).

    python scripts/heuristic_scaling.py --rows 100 --cols 100 --out results/scaling.csv
"""

import argparse
import csv
import sys

from alp.bench import heuristic_cost_scaling
from alp.graph import generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=100)
    ap.add_argument("--cols", type=int, default=100)
    ap.add_argument("--ks", default="4,8,16,32,64")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--queries", type=int, default=40)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args()

    g = generate("grid", {"rows": args.rows, "cols": args.cols})
    ks = tuple(int(k) for k in args.ks.split(","))
    res = heuristic_cost_scaling(g, ks=ks, seed=args.seed, queries=args.queries, repeats=args.repeats)
    rows = [
        {"k": k, "alt_ns": f"{a:.1f}", "alp_ns": f"{p:.1f}", "alt_evals": ae, "alp_evals": pe}
        for k, a, p, ae, pe in zip(res["k"], res["alt_ns"], res["alp_ns"], res["alt_evals"], res["alp_evals"])
    ]
    w = csv.DictWriter(open(args.out, "w", newline="") if args.out else sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    print(f"# slope ns/landmark: alt {res['alt_slope']:.2f}, alp {res['alp_slope']:.2f}, "
          f"ratio {res['alt_slope'] / max(abs(res['alp_slope']), 1e-9):.1f}", file=sys.stderr)


if __name__ == "__main__":
    main()
