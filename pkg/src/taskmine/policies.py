"""Queue disciplines for the worker pool.

Every policy exposes the same owner/thief surface: ``put`` and ``get`` are
used on the owning worker's side, ``steal`` by any other worker. A steal
returns a batch of tasks; every policy except the clustered one steals a
single task at a time, the clustered policy steals a whole bucket.

All queues are internally locked; owner and thieves may call concurrently
and each task is handed out exactly once.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from heapq import heappop, heappush

_MASK64 = (1 << 64) - 1

#: Policy names accepted by the CLI and PolicyConfig.
POLICY_NAMES = ("cilk", "fifo", "lifo", "priority", "clustered")

DEFAULT_BUCKETS = 4096


def item_hash(item: int) -> int:
    """64-bit mix of one item id (the splitmix64 finalizer).

    Deterministic across runs, workers and platforms, so bucket layouts are
    reproducible everywhere.
    """
    x = (item & _MASK64) + 0x9E3779B97F4A7C15 & _MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
    return x ^ (x >> 31)


def cluster_hash(itemset) -> int:
    """XOR of item_hash over all but the last item of a sorted itemset.

    Equal-size itemsets sharing their leading prefix hash identically, which
    is what clusters their tasks into one bucket.
    """
    if len(itemset) < 2:
        raise ValueError("cluster_hash needs an itemset of size >= 2")
    h = 0
    for item in itemset[:-1]:
        h ^= item_hash(item)
    return h


class CilkQueue:
    """Work-stealing deque: the owner takes the newest task, thieves the oldest."""

    def __init__(self):
        self._lock = threading.Lock()
        self._tasks = deque()

    def put(self, task) -> None:
        with self._lock:
            self._tasks.append(task)

    def get(self):
        with self._lock:
            return self._tasks.pop() if self._tasks else None

    def steal(self) -> list:
        with self._lock:
            return [self._tasks.popleft()] if self._tasks else []

    def __len__(self) -> int:
        return len(self._tasks)


class FifoQueue:
    """Owner takes the oldest task; thieves take from the opposite (newest) end."""

    def __init__(self):
        self._lock = threading.Lock()
        self._tasks = deque()

    def put(self, task) -> None:
        with self._lock:
            self._tasks.append(task)

    def get(self):
        with self._lock:
            return self._tasks.popleft() if self._tasks else None

    def steal(self) -> list:
        with self._lock:
            return [self._tasks.pop()] if self._tasks else []

    def __len__(self) -> int:
        return len(self._tasks)


class LifoQueue:
    """Owner takes the newest task; thieves take the oldest.

    Same deque ends as the Cilk-style queue; kept as its own policy name.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._tasks = deque()

    def put(self, task) -> None:
        with self._lock:
            self._tasks.append(task)

    def get(self):
        with self._lock:
            return self._tasks.pop() if self._tasks else None

    def steal(self) -> list:
        with self._lock:
            return [self._tasks.popleft()] if self._tasks else []

    def __len__(self) -> int:
        return len(self._tasks)


class _MaxFirst:
    """Comparison wrapper so heapq pops the largest priority first.

    Value equality must hold so tuple comparison falls through to the
    insertion sequence number on priority ties.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other) -> bool:
        return other.value < self.value

    def __eq__(self, other) -> bool:
        return self.value == other.value


class PriorityTaskQueue:
    """Highest task priority first, insertion order breaking ties.

    Priorities only need to be mutually comparable (integer ranks, or the
    itemset tuples the miner attaches); a missing priority counts as rank 0.
    Thieves receive the same maximal-priority task an owner get would.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._heap = []
        self._seq = 0

    def put(self, task) -> None:
        rank = task.attrs.priority
        if rank is None:
            rank = 0
        with self._lock:
            heappush(self._heap, (_MaxFirst(rank), self._seq, task))
            self._seq += 1

    def get(self):
        with self._lock:
            return heappop(self._heap)[2] if self._heap else None

    def steal(self) -> list:
        with self._lock:
            return [heappop(self._heap)[2]] if self._heap else []

    def __len__(self) -> int:
        return len(self._heap)


class ClusteredQueue:
    """Bucketed hash-table queue with whole-bucket stealing.

    A task's bucket comes from the cluster hash of the itemset carried as its
    priority, so tasks sharing a (k-1)-prefix land together. The owner drains
    one bucket at a time in ascending index order; a thief empties the first
    non-empty bucket in one batch, never splitting it.
    """

    def __init__(self, nbuckets: int = DEFAULT_BUCKETS):
        if nbuckets < 1 or nbuckets & (nbuckets - 1):
            raise ValueError("nbuckets must be a power of two")
        self.nbuckets = nbuckets
        self._lock = threading.Lock()
        self._buckets = [deque() for _ in range(nbuckets)]
        self._size = 0
        # Owner scan position: advances while draining, wraps to 0 once
        # everything at or past it is gone.
        self._cursor = 0
        #: Set to a list to record (bucket_index, batch) for every steal.
        self.steal_log = None

    def bucket_of(self, task) -> int:
        itemset = task.attrs.priority
        try:
            size = len(itemset)
        except TypeError:
            raise ValueError(
                "clustered policy needs an itemset as the task priority"
            ) from None
        if size < 2:
            raise ValueError("clustered policy needs an itemset of size >= 2")
        return cluster_hash(itemset) % self.nbuckets

    def put(self, task) -> None:
        b = self.bucket_of(task)
        with self._lock:
            self._buckets[b].append(task)
            self._size += 1

    def get(self):
        with self._lock:
            if not self._size:
                self._cursor = 0
                return None
            idx = self._scan(self._cursor)
            if idx is None:
                self._cursor = 0
                idx = self._scan(0)
            self._cursor = idx
            self._size -= 1
            return self._buckets[idx].popleft()

    def steal(self) -> list:
        with self._lock:
            if not self._size:
                return []
            idx = self._scan(0)
            bucket = self._buckets[idx]
            batch = list(bucket)
            bucket.clear()
            self._size -= len(batch)
            if self.steal_log is not None:
                self.steal_log.append((idx, batch))
            return batch

    def _scan(self, start: int):
        buckets = self._buckets
        for i in range(start, self.nbuckets):
            if buckets[i]:
                return i
        return None

    def __len__(self) -> int:
        return self._size


@dataclass(frozen=True)
class PolicyConfig:
    """Queue discipline selection, fixed at pool construction."""

    name: str
    nbuckets: int = DEFAULT_BUCKETS

    def __post_init__(self):
        if self.name not in POLICY_NAMES:
            raise ValueError(
                f"unknown policy {self.name!r}; expected one of {', '.join(POLICY_NAMES)}"
            )
        if self.nbuckets < 1 or self.nbuckets & (self.nbuckets - 1):
            raise ValueError("nbuckets must be a power of two")

    def make_queue(self):
        if self.name == "cilk":
            return CilkQueue()
        if self.name == "fifo":
            return FifoQueue()
        if self.name == "lifo":
            return LifoQueue()
        if self.name == "priority":
            return PriorityTaskQueue()
        return ClusteredQueue(self.nbuckets)
