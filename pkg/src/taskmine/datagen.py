"""Synthetic transaction databases for benchmarks and stress tests."""

from __future__ import annotations

import random

from .apriori import TransactionDB


def synthetic_db(
    n_items: int, n_transactions: int, txn_len: int, seed: int = 0
) -> TransactionDB:
    """Uniform random baskets: ``txn_len`` distinct items out of ``n_items``.

    With txn_len well below n_items, single items are frequent at moderate
    thresholds while pairs are not, which yields one wide counting stage --
    the shape used for the steal-behavior benchmarks.
    """
    rng = random.Random(seed)
    rows = [rng.sample(range(n_items), txn_len) for _ in range(n_transactions)]
    return TransactionDB.from_rows(rows)


def random_db(
    rng: random.Random, max_items: int = 12, max_transactions: int = 64
) -> TransactionDB:
    """Small random database for oracle comparisons; shape varies per draw."""
    n_items = rng.randint(1, max_items)
    m = rng.randint(1, max_transactions)
    rows = []
    for _ in range(m):
        size = rng.randint(0, n_items)
        rows.append(rng.sample(range(n_items), size))
    return TransactionDB.from_rows(rows)
