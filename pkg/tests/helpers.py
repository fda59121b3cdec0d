"""Shared test oracles, independent of the implementation under test."""

from __future__ import annotations


def brute_force_frequent(db, threshold: int) -> dict:
    """Exhaustive oracle: enumerate every itemset over the observed items and
    count it by direct subset tests against the transactions.

    Bitmask-based; no tidlists involved. Only usable for small item
    universes (<= 16 items).
    """
    items = sorted(db.items)
    n = len(items)
    assert n <= 16, "oracle is exponential in the item count"
    bit = {item: 1 << i for i, item in enumerate(items)}
    txn_masks = [sum(bit[i] for i in txn) for txn in db.transactions]
    out = {}
    for mask in range(1, 1 << n):
        count = sum(1 for t in txn_masks if t & mask == mask)
        if count >= threshold:
            itemset = tuple(items[i] for i in range(n) if mask >> i & 1)
            out[itemset] = count
    return out


def flatten(levels) -> dict:
    """Mining output as one {itemset: support} dict."""
    return {itemset: support for lv in levels for itemset, support in lv.frequent}
