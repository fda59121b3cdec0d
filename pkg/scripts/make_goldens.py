#!/usr/bin/env python3
"""Pin golden per-level frequent counts from local FIMI datasets.

Runs the sequential miner on mushroom (support 0.10) and chess (support
0.6) and writes tests/goldens/<name>_<support>.json. The acceptance suite
then checks every policy against these tables. Datasets are looked up in
data/fimi/ (or --fimi-dir / $TASKMINE_FIMI_DIR) and are never downloaded.
"""

import argparse
import json
import os
import time
from pathlib import Path

from taskmine import SupportThreshold, mine_sequential, parse_fimi

REPO_ROOT = Path(__file__).resolve().parents[1]
TARGETS = [("mushroom", 0.10), ("chess", 0.6)]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--fimi-dir",
        default=os.environ.get("TASKMINE_FIMI_DIR", REPO_ROOT / "data" / "fimi"),
    )
    ap.add_argument("--golden-dir", default=REPO_ROOT / "tests" / "goldens")
    args = ap.parse_args()
    fimi_dir = Path(args.fimi_dir)
    golden_dir = Path(args.golden_dir)
    golden_dir.mkdir(parents=True, exist_ok=True)

    wrote = 0
    for name, support in TARGETS:
        path = fimi_dir / f"{name}.dat"
        if not path.exists():
            print(f"skip {name}: {path} not found")
            continue
        with open(path, "r", encoding="ascii") as fh:
            db = parse_fimi(fh)
        t0 = time.perf_counter()
        levels = mine_sequential(db, SupportThreshold(fraction=support))
        dt = time.perf_counter() - t0
        per_level = {str(lv.k): len(lv.frequent) for lv in levels}
        out = golden_dir / f"{name}_{support}.json"
        out.write_text(
            json.dumps(
                {"dataset": name, "support": support, "levels": per_level}, indent=2
            )
            + "\n"
        )
        total = sum(per_level.values())
        print(f"{name}@{support}: {total} frequent itemsets in {dt:.1f}s -> {out}")
        wrote += 1
    if not wrote:
        print("no datasets found; nothing pinned")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
