"""Search for inconsistency and non-dominance witnesses and persist them as JSON lines.

    python scripts/find_witnesses.py --seed 0 --out tests/fixtures
"""

import argparse
from pathlib import Path

from alp.verify import find_consistency_witness, find_dominance_counterexamples, freeze, replay, write_reports


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--out", default="tests/fixtures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    found, used = find_consistency_witness(args.trials, args.seed)
    if not found:
        raise SystemExit(f"no consistency witness in {used} trials")
    found = [freeze(r) for r in found]
    assert all(replay(r) for r in found)
    (out / "consistency_witness.jsonl").write_text(write_reports(found))
    print(f"consistency witness after {used} trials: {found[0].witness} {found[0].values}")

    l_dl, dl_l = find_dominance_counterexamples(args.trials, args.seed, include_canonical=False)
    l_dl, dl_l = [freeze(r) for r in l_dl], [freeze(r) for r in dl_l]
    assert all(replay(r) for r in l_dl + dl_l)
    (out / "dominance_witnesses.jsonl").write_text(write_reports(l_dl + dl_l))
    print(f"dominance witnesses: {len(l_dl)} alt>alp, {len(dl_l)} alp>alt")


if __name__ == "__main__":
    main()
