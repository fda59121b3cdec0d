#!/usr/bin/env python3
"""Head-to-head policy comparison on a synthetic dataset.

Generates a market-basket style dataset whose level-2 stage spawns ~20k
counting tasks (all from the coordinator, so the initial imbalance is
maximal), then benchmarks the five scheduling policies via the ``bench``
subcommand: per-policy mean/median wall time, runtimes normalized to the
first policy, and steal counters.
"""

import argparse
import tempfile
from pathlib import Path

from taskmine.cli import main as cli_main
from taskmine.datagen import synthetic_db
from taskmine.fimi import write_fimi


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--items", type=int, default=200)
    ap.add_argument("--transactions", type=int, default=3000)
    ap.add_argument("--txn-len", type=int, default=40)
    ap.add_argument("--minsup-count", type=int, default=350)
    ap.add_argument("--threads", type=int, default=8)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--policies", default="cilk,fifo,lifo,priority,clustered")
    ap.add_argument("--stats", help="write the full JSON report here")
    args = ap.parse_args()

    workdir = Path(tempfile.mkdtemp(prefix="taskmine-bench-"))
    dataset = workdir / "synthetic.dat"
    db = synthetic_db(args.items, args.transactions, args.txn_len, args.seed)
    with open(dataset, "w", encoding="ascii") as fh:
        write_fimi(db, fh)
    print(f"# synthetic dataset: {dataset} ({db.m} transactions, {db.n_items} items)")

    argv = [
        "bench",
        "--input", str(dataset),
        "--minsup-count", str(args.minsup_count),
        "--policies", args.policies,
        "--threads", str(args.threads),
        "--repeats", str(args.repeats),
        "--seed", str(args.seed),
    ]
    if args.stats:
        argv += ["--stats", args.stats]
    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
