"""FIMI-format dataset parsing and the run artifact writers.

A dataset is plain ASCII text, one transaction per non-empty line, items as
whitespace-separated non-negative decimal integers. Parsing normalizes each
transaction (dedup + ascending sort) so supports are well defined on noisy
files. Run statistics are written as JSON with a stable field layout.
"""

from __future__ import annotations

import io
import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Union

from .apriori import TransactionDB


class FimiParseError(ValueError):
    """Malformed dataset line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def parse_fimi(stream: Union[str, Iterable[str]]) -> TransactionDB:
    """Parse FIMI text into a normalized TransactionDB.

    Accepts a string or any iterable of lines (e.g. an open file). Blank
    lines are skipped; any non-integer or negative token raises
    FimiParseError with its line number, never a partial database.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    transactions = []
    for line_no, line in enumerate(stream, start=1):
        tokens = line.split()
        if not tokens:
            continue
        items = []
        for tok in tokens:
            try:
                value = int(tok)
            except ValueError:
                raise FimiParseError(line_no, f"non-integer token {tok!r}") from None
            if value < 0:
                raise FimiParseError(line_no, f"negative item {value}")
            items.append(value)
        transactions.append(tuple(sorted(set(items))))
    return TransactionDB(transactions)


def write_fimi(db: TransactionDB, stream) -> None:
    """Inverse of parse_fimi for normalized databases."""
    for txn in db.transactions:
        stream.write(" ".join(map(str, txn)))
        stream.write("\n")


def write_itemsets(results, stream) -> None:
    """One line per frequent itemset: items ascending, then "(support)".

    Levels appear in order and itemsets lexicographically within a level, so
    equal mining results serialize byte-identically.
    """
    for level in results:
        for itemset, support in level.frequent:
            stream.write(" ".join(map(str, itemset)))
            stream.write(f" ({support})\n")


def render_itemsets(results) -> str:
    buf = io.StringIO()
    write_itemsets(results, buf)
    return buf.getvalue()


@dataclass
class LevelStats:
    k: int
    candidates: int
    frequent: int
    seconds: float


@dataclass
class WorkerStatsRecord:
    worker: int
    tasks_executed: int
    steal_attempts: int
    steals_successful: int
    tasks_stolen: int


@dataclass
class StatsRecord:
    """Everything observable about one mining run, JSON-serializable."""

    dataset: str
    policy: str
    nworkers: int
    minsup_fraction: Optional[float]
    minsup_count: Optional[int]
    resolved_threshold: int
    seed: int
    affinity: str
    nbuckets: Optional[int]
    total_seconds: float
    tasks_spawned: int
    levels: list = field(default_factory=list)
    workers: list = field(default_factory=list)


def stats_record_from_run(
    *,
    dataset: str,
    policy: str,
    minsup,
    resolved_threshold: int,
    seed: int,
    affinity: str,
    nbuckets: Optional[int],
    levels,
    level_seconds: dict,
    total_seconds: float,
    metrics,
    tasks_spawned: int,
) -> StatsRecord:
    """Assemble the per-run record from mining output and pool metrics."""
    level_stats = [
        LevelStats(
            k=lv.k,
            candidates=lv.candidates_counted,
            frequent=len(lv.frequent),
            seconds=level_seconds.get(lv.k, 0.0),
        )
        for lv in levels
    ]
    worker_stats = [
        WorkerStatsRecord(
            worker=i,
            tasks_executed=metrics.tasks_executed[i],
            steal_attempts=metrics.steal_attempts[i],
            steals_successful=metrics.steals_successful[i],
            tasks_stolen=metrics.tasks_stolen[i],
        )
        for i in range(len(metrics.tasks_executed))
    ]
    return StatsRecord(
        dataset=dataset,
        policy=policy,
        nworkers=len(metrics.tasks_executed),
        minsup_fraction=minsup.fraction,
        minsup_count=minsup.count,
        resolved_threshold=resolved_threshold,
        seed=seed,
        affinity=affinity,
        nbuckets=nbuckets,
        total_seconds=total_seconds,
        tasks_spawned=tasks_spawned,
        levels=level_stats,
        workers=worker_stats,
    )


def write_stats(record, stream) -> None:
    """Write one run record (or any dataclass tree) as indented JSON."""
    json.dump(_as_tree(record), stream, indent=2)
    stream.write("\n")


def _as_tree(record):
    if hasattr(record, "__dataclass_fields__"):
        return asdict(record)
    return record
