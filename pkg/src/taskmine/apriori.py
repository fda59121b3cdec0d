"""Level-synchronous frequent-itemset mining over transaction-ID lists.

Stage 1 builds the vertical index in one pass; every later stage generates
candidates from the previous frequent itemsets, counts each candidate by
intersecting its items' tidlists, and keeps those meeting the threshold.
``mine_sequential`` is the single-threaded reference; ``mine_parallel`` runs
one counting task per candidate on a worker pool and must match it exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Optional, Sequence

import numpy as np

from .policies import cluster_hash
from .runtime import Task, TaskAttributes, WorkerPool

Itemset = tuple[int, ...]


@dataclass
class TransactionDB:
    """Transactions as sorted duplicate-free tuples of non-negative item ids."""

    transactions: list[Itemset]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "TransactionDB":
        """Normalize arbitrary rows: per-transaction dedup and ascending sort."""
        return cls([tuple(sorted(set(row))) for row in rows])

    @property
    def m(self) -> int:
        return len(self.transactions)

    @property
    def items(self) -> frozenset:
        return frozenset(i for t in self.transactions for i in t)

    @property
    def n_items(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class SupportThreshold:
    """Minimum support as a fraction of transactions or an absolute count."""

    fraction: Optional[float] = None
    count: Optional[int] = None

    def __post_init__(self):
        if (self.fraction is None) == (self.count is None):
            raise ValueError("give exactly one of fraction or count")
        if self.fraction is not None and not 0.0 < self.fraction <= 1.0:
            raise ValueError("fraction must be in (0, 1]")
        if self.count is not None and self.count < 1:
            raise ValueError("count must be >= 1")

    def resolve(self, m: int) -> int:
        """Absolute threshold for an m-transaction database; always >= 1.

        Fractional thresholds use ceil(fraction * m), with a small epsilon so
        float noise on an exact product cannot bump the ceiling.
        """
        if self.count is not None:
            return self.count
        raw = self.fraction * m
        return max(1, math.ceil(raw - 1e-9 * max(1.0, raw)))


@dataclass
class VerticalIndex:
    """Sorted transaction-id lists for the frequent 1-items.

    Keys are dense ids assigned in first-occurrence order over the input
    scan; ``dense_to_item`` maps them back to input item ids.
    """

    tidlists: dict
    dense_to_item: list = field(default_factory=list)


@dataclass
class LevelResult:
    """Frequent k-itemsets (input item ids, lexicographically sorted) with supports."""

    k: int
    frequent: list
    candidates_counted: int

    def itemsets(self) -> list:
        return [s for s, _ in self.frequent]


def build_vertical(db: TransactionDB, minsup: SupportThreshold):
    """One pass over the database: tidlists for every item, then the level-1 cut.

    Returns the vertical index (infrequent tidlists discarded) and the
    level-1 result in input item ids.
    """
    threshold = minsup.resolve(db.m)
    dense: dict = {}
    dense_to_item: list = []
    lists: list = []
    for tid, txn in enumerate(db.transactions):
        for item in txn:
            d = dense.get(item)
            if d is None:
                d = len(dense_to_item)
                dense[item] = d
                dense_to_item.append(item)
                lists.append([])
            lists[d].append(tid)
    tidlists = {}
    frequent = []
    for d, tids in enumerate(lists):
        if len(tids) >= threshold:
            tidlists[d] = np.asarray(tids, dtype=np.int64)
            frequent.append(((dense_to_item[d],), len(tids)))
    frequent.sort()
    return VerticalIndex(tidlists, dense_to_item), LevelResult(1, frequent, len(lists))


def intersect(a, b):
    """Intersection of two sorted duplicate-free tidlists.

    Accepts lists or integer arrays, returns a sorted duplicate-free int64
    array. Vectorized binary search of the shorter list in the longer one.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 0:
        return a
    pos = np.searchsorted(b, a)
    np.minimum(pos, len(b) - 1, out=pos)
    return a[b[pos] == a]


def count_support(candidate: Sequence[int], index: VerticalIndex) -> int:
    """Support of ``candidate``: the size of the intersection of its items'
    tidlists, folded left to right over the sorted itemset."""
    tidlists = index.tidlists
    try:
        acc = tidlists[candidate[0]]
        for item in candidate[1:]:
            acc = intersect(acc, tidlists[item])
    except KeyError as exc:
        raise KeyError(f"item {exc.args[0]!r} missing from vertical index") from None
    return len(acc)


def generate_candidates(frequent_prev: Sequence[Itemset], prune: bool = False) -> list:
    """Join every pair of (k-1)-itemsets sharing their first (k-2) items.

    ``frequent_prev`` must be lexicographically sorted; the output is sorted
    and duplicate-free. With ``prune=True`` candidates that have an
    infrequent (k-1)-subset are dropped, which trims counting work but never
    changes mining results.
    """
    candidates: list = []
    n = len(frequent_prev)
    i = 0
    while i < n:
        prefix = frequent_prev[i][:-1]
        j = i
        while j < n and frequent_prev[j][:-1] == prefix:
            j += 1
        group = frequent_prev[i:j]
        for x in range(len(group)):
            base = group[x]
            for y in range(x + 1, len(group)):
                candidates.append(base + (group[y][-1],))
        i = j
    if prune:
        prev = set(frequent_prev)
        # The two join parents (drop last / drop second-to-last) are frequent
        # by construction; only the remaining subsets need checking.
        candidates = [
            c
            for c in candidates
            if all(c[:s] + c[s + 1 :] in prev for s in range(len(c) - 2))
        ]
    return candidates


def mine_sequential(
    db: TransactionDB,
    minsup: SupportThreshold,
    prune: bool = False,
    timings_out: Optional[dict] = None,
) -> list:
    """Single-threaded reference miner; parallel runs must match it exactly."""

    def count_level(candidates, index, _level):
        return [count_support(c, index) for c in candidates]

    return _mine(db, minsup, count_level, prune, timings_out)


def mine_parallel(
    db: TransactionDB,
    minsup: SupportThreshold,
    pool: WorkerPool,
    affinity: str = "local",
    prune: bool = False,
    timings_out: Optional[dict] = None,
) -> list:
    """Breadth-first mining with one counting task per candidate.

    The coordinator generates candidates sequentially and spawns every task;
    with the default spawner-local placement they all land on worker 0 and
    spread through stealing. ``affinity="distributed"`` instead scatters them
    up front: by cluster hash for the clustered policy, round-robin
    otherwise. Each task carries its itemset as the task priority, reads the
    shared vertical index, and writes its support into a preallocated slot.
    """
    if affinity not in ("local", "distributed"):
        raise ValueError(f"unknown affinity mode {affinity!r}")
    distribute = affinity == "distributed"
    clustered = pool.policy.name == "clustered"
    nworkers = pool.nworkers

    def count_level(candidates, index, _level):
        supports = [0] * len(candidates)
        for i, c in enumerate(candidates):
            if distribute:
                target = cluster_hash(c) % nworkers if clustered else i % nworkers
            else:
                target = None
            pool.spawn(
                Task(
                    partial(_count_into, supports, i, c, index),
                    TaskAttributes(priority=c, affinity=target),
                )
            )
        pool.wait_all()
        return supports

    return _mine(db, minsup, count_level, prune, timings_out)


def _count_into(supports, i, candidate, index):
    supports[i] = count_support(candidate, index)


def _mine(db, minsup, count_level, prune, timings_out):
    """Shared level loop: stage 1 inline, one counting pass per later stage.

    Stops when a stage produces no candidates or no frequent itemsets; a
    stage whose candidates were counted is included in the result even when
    none were frequent.
    """
    threshold = minsup.resolve(db.m)
    t0 = time.perf_counter()
    index, level1 = build_vertical(db, minsup)
    if timings_out is not None:
        timings_out[1] = time.perf_counter() - t0
    levels = [level1]
    prev = sorted((d,) for d in index.tidlists)
    k = 2
    while prev:
        t0 = time.perf_counter()
        candidates = generate_candidates(prev, prune=prune)
        if not candidates:
            break
        supports = count_level(candidates, index, k)
        frequent_dense = [
            (c, int(s)) for c, s in zip(candidates, supports) if s >= threshold
        ]
        if timings_out is not None:
            timings_out[k] = time.perf_counter() - t0
        levels.append(
            _public_level(k, frequent_dense, len(candidates), index.dense_to_item)
        )
        prev = [c for c, _ in frequent_dense]
        k += 1
    return levels


def _public_level(k, frequent_dense, counted, dense_to_item):
    out = [
        (tuple(sorted(dense_to_item[d] for d in c)), s) for c, s in frequent_dense
    ]
    out.sort()
    return LevelResult(k, out, counted)
