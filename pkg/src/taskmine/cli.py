"""Command-line front end: mine one dataset, or benchmark policies head-to-head.

The timed region covers mining only; parsing, pool construction and output
writing stay outside it. ``bench`` refuses to report timings when any run's
itemset output disagrees with the others.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .apriori import SupportThreshold, mine_parallel
from .fimi import (
    FimiParseError,
    parse_fimi,
    render_itemsets,
    stats_record_from_run,
    write_itemsets,
    write_stats,
)
from .policies import DEFAULT_BUCKETS, POLICY_NAMES, PolicyConfig, item_hash
from .runtime import WorkerPool


@dataclass
class RunConfig:
    """One resolved invocation of the miner or the benchmark."""

    input: str
    minsup_fraction: Optional[float] = None
    minsup_count: Optional[int] = None
    policy: str = "cilk"
    threads: int = 8
    buckets: int = DEFAULT_BUCKETS
    seed: int = 0
    repeats: int = 5
    affinity: str = "local"
    out: Optional[str] = None
    stats: Optional[str] = None
    policies: list = field(default_factory=lambda: list(POLICY_NAMES))

    def threshold(self) -> SupportThreshold:
        return SupportThreshold(fraction=self.minsup_fraction, count=self.minsup_count)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _policy_list(text: str) -> list:
    names = [p.strip() for p in text.split(",") if p.strip()]
    for name in names:
        if name not in POLICY_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown policy {name!r}; expected one of {', '.join(POLICY_NAMES)}"
            )
    if not names:
        raise argparse.ArgumentTypeError("need at least one policy")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taskmine",
        description="Frequent-itemset mining on a work-stealing task pool.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="FIMI .dat file to mine")
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument(
            "--minsup", type=float, help="minimum support as a fraction of transactions"
        )
        group.add_argument(
            "--minsup-count", type=_positive_int, help="minimum support as a count"
        )
        p.add_argument("--threads", type=_positive_int, default=8)
        p.add_argument(
            "--buckets",
            type=_positive_int,
            default=DEFAULT_BUCKETS,
            help="bucket count for the clustered policy (power of two)",
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--affinity", choices=("local", "distributed"), default="local")
        p.add_argument("--out", help="itemset output file (default: stdout)")
        p.add_argument("--stats", help="JSON stats output file")

    mine = sub.add_parser("mine", help="mine one dataset under one policy")
    common(mine)
    mine.add_argument("--policy", choices=POLICY_NAMES, default="cilk")

    bench = sub.add_parser("bench", help="compare policies on one dataset")
    common(bench)
    bench.add_argument(
        "--policies",
        type=_policy_list,
        default=list(POLICY_NAMES),
        help="comma-separated policies; first one is the normalization baseline",
    )
    bench.add_argument("--repeats", type=_positive_int, default=5)
    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        input=args.input,
        minsup_fraction=args.minsup,
        minsup_count=args.minsup_count,
        policy=getattr(args, "policy", "cilk"),
        threads=args.threads,
        buckets=args.buckets,
        seed=args.seed,
        repeats=getattr(args, "repeats", 5),
        affinity=args.affinity,
        out=args.out,
        stats=args.stats,
        policies=list(getattr(args, "policies", POLICY_NAMES)),
    )


def _load_db(config: RunConfig):
    with open(config.input, "r", encoding="ascii") as fh:
        return parse_fimi(fh)


def _run_once(db, config: RunConfig, policy: str, seed: int):
    """One timed mining run; returns (levels, level timings, total s, metrics, spawned)."""
    pool = WorkerPool(config.threads, PolicyConfig(policy, config.buckets), seed)
    try:
        timings: dict = {}
        t0 = time.perf_counter()
        levels = mine_parallel(
            db, config.threshold(), pool, affinity=config.affinity, timings_out=timings
        )
        total = time.perf_counter() - t0
        metrics = pool.metrics()
        spawned = pool.tasks_spawned
    finally:
        pool.shutdown()
    return levels, timings, total, metrics, spawned


def cmd_mine(config: RunConfig) -> int:
    """Parse, mine once, write itemsets and stats."""
    db = _load_db(config)
    minsup = config.threshold()
    threshold = minsup.resolve(db.m)
    levels, timings, total, metrics, spawned = _run_once(
        db, config, config.policy, config.seed
    )
    if config.out:
        with open(config.out, "w", encoding="ascii") as fh:
            write_itemsets(levels, fh)
    else:
        write_itemsets(levels, sys.stdout)
    record = stats_record_from_run(
        dataset=Path(config.input).name,
        policy=config.policy,
        minsup=minsup,
        resolved_threshold=threshold,
        seed=config.seed,
        affinity=config.affinity,
        nbuckets=config.buckets if config.policy == "clustered" else None,
        levels=levels,
        level_seconds=timings,
        total_seconds=total,
        metrics=metrics,
        tasks_spawned=spawned,
    )
    if config.stats:
        with open(config.stats, "w", encoding="ascii") as fh:
            write_stats(record, fh)
    n_frequent = sum(len(lv.frequent) for lv in levels)
    print(
        f"{record.dataset}: policy={config.policy} threads={config.threads} "
        f"threshold={threshold} frequent={n_frequent} seconds={total:.4f}",
        file=sys.stderr,
    )
    return 0


def cmd_bench(config: RunConfig, policies: list) -> int:
    """Run each policy ``repeats`` times; verify outputs agree, then report."""
    db = _load_db(config)
    minsup = config.threshold()
    threshold = minsup.resolve(db.m)
    base = item_hash(config.seed)
    reference_output = None
    per_policy = []
    for policy_index, policy in enumerate(policies):
        runs = []
        for rep in range(config.repeats):
            run_seed = item_hash(base + policy_index * 100003 + rep)
            levels, timings, total, metrics, spawned = _run_once(
                db, config, policy, run_seed
            )
            output = render_itemsets(levels)
            if reference_output is None:
                reference_output = output
            elif output != reference_output:
                print(
                    f"error: itemset output mismatch for policy={policy} rep={rep}; "
                    "refusing to report timings",
                    file=sys.stderr,
                )
                return 1
            runs.append(
                stats_record_from_run(
                    dataset=Path(config.input).name,
                    policy=policy,
                    minsup=minsup,
                    resolved_threshold=threshold,
                    seed=run_seed,
                    affinity=config.affinity,
                    nbuckets=config.buckets if policy == "clustered" else None,
                    levels=levels,
                    level_seconds=timings,
                    total_seconds=total,
                    metrics=metrics,
                    tasks_spawned=spawned,
                )
            )
        per_policy.append((policy, runs))

    baseline_median = statistics.median(r.total_seconds for r in per_policy[0][1])
    print(
        f"# {Path(config.input).name}: threads={config.threads} threshold={threshold} "
        f"repeats={config.repeats}; normalized to first policy ({policies[0]})"
    )
    header = f"{'policy':<10} {'mean_s':>9} {'median_s':>9} {'normalized':>10} {'steals':>8} {'stolen':>8}"
    print(header)
    summary = []
    for policy, runs in per_policy:
        times = [r.total_seconds for r in runs]
        steals = [sum(w.steals_successful for w in r.workers) for r in runs]
        stolen = [sum(w.tasks_stolen for w in r.workers) for r in runs]
        mean_s = statistics.mean(times)
        median_s = statistics.median(times)
        normalized = median_s / baseline_median if baseline_median else float("nan")
        med_steals = statistics.median(steals)
        med_stolen = statistics.median(stolen)
        print(
            f"{policy:<10} {mean_s:>9.4f} {median_s:>9.4f} {normalized:>10.3f} "
            f"{med_steals:>8.0f} {med_stolen:>8.0f}"
        )
        summary.append(
            {
                "policy": policy,
                "mean_seconds": mean_s,
                "median_seconds": median_s,
                "normalized": normalized,
                "median_steals_successful": med_steals,
                "median_tasks_stolen": med_stolen,
                "runs": [asdict(r) for r in runs],
            }
        )
    if config.out:
        with open(config.out, "w", encoding="ascii") as fh:
            fh.write(reference_output or "")
    if config.stats:
        tree = {
            "dataset": Path(config.input).name,
            "threads": config.threads,
            "resolved_threshold": threshold,
            "repeats": config.repeats,
            "affinity": config.affinity,
            "seed": config.seed,
            "normalized_baseline": policies[0],
            "outputs_identical": True,
            "policies": summary,
        }
        with open(config.stats, "w", encoding="ascii") as fh:
            write_stats(tree, fh)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        if args.command == "mine":
            return cmd_mine(config)
        return cmd_bench(config, config.policies)
    except (FimiParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
