"""Fixed-size worker pool executing spawned tasks under a pluggable queue policy.

Workers run tasks from their own queue and steal from uniformly random
victims when it runs dry. A single external coordinator thread may spawn
tasks and block in :meth:`WorkerPool.wait_all` for the level barrier.
"""

from __future__ import annotations

import random
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union

from .policies import PolicyConfig, item_hash

_IDLE_SLEEP_MIN = 2e-5
_IDLE_SLEEP_MAX = 2e-3
_PARK_TIMEOUT = 0.1


@dataclass(frozen=True)
class TaskAttributes:
    """Optional per-task payload: a policy priority and a target worker.

    The priority is opaque to the runtime: an integer rank under the priority
    policy, the mined itemset under the clustered one.
    """

    priority: Any = None
    affinity: Optional[int] = None


_NO_ATTRS = TaskAttributes()


class Task:
    """A deferred unit of work.

    ``work`` is a no-argument callable; results travel through caller-owned
    slots, not return values. Each spawned task is executed exactly once.
    """

    __slots__ = ("work", "attrs")

    def __init__(self, work: Callable[[], None], attrs: TaskAttributes = _NO_ATTRS):
        self.work = work
        self.attrs = attrs


@dataclass
class RunMetrics:
    """Software-observable counters, one entry per worker.

    ``level_seconds`` and ``total_seconds`` are left zeroed by the pool and
    filled in by whoever drives a mining run. Failed-steal attempts may keep
    ticking briefly after a barrier; the executed/stolen counters are exact
    at quiescence.
    """

    tasks_executed: list[int]
    steal_attempts: list[int]
    steals_successful: list[int]
    tasks_stolen: list[int]
    level_seconds: dict[int, float] = field(default_factory=dict)
    total_seconds: float = 0.0

    @property
    def total_executed(self) -> int:
        return sum(self.tasks_executed)

    @property
    def total_steal_attempts(self) -> int:
        return sum(self.steal_attempts)

    @property
    def total_steals_successful(self) -> int:
        return sum(self.steals_successful)

    @property
    def total_tasks_stolen(self) -> int:
        return sum(self.tasks_stolen)


class TaskFailuresError(RuntimeError):
    """Raised by wait_all after draining when one or more task bodies raised."""

    def __init__(self, failures):
        self.failures = failures
        first = failures[0][1]
        super().__init__(f"{len(failures)} task(s) failed; first: {first!r}")


class _WorkerStats:
    __slots__ = ("tasks_executed", "steal_attempts", "steals_successful", "tasks_stolen")

    def __init__(self):
        self.tasks_executed = 0
        self.steal_attempts = 0
        self.steals_successful = 0
        self.tasks_stolen = 0


def pick_victim(rng: random.Random, worker: int, nworkers: int) -> int:
    """Uniform draw over the other workers; never returns ``worker``."""
    v = rng.randrange(nworkers - 1)
    return v + 1 if v >= worker else v


_current = threading.local()


def current_worker(pool: "WorkerPool") -> Optional[int]:
    """Index of the calling worker within ``pool``, or None for outside callers."""
    held = getattr(_current, "worker", None)
    if held is not None and held[0] is pool:
        return held[1]
    return None


class WorkerPool:
    """``nworkers`` threads, one queue each, random-victim work stealing.

    Spawns from a worker land on that worker's queue; spawns from outside the
    pool land on worker 0 (unless the task carries an affinity). ``wait_all``
    blocks the external coordinator until every outstanding task, including
    tasks spawned by tasks, has completed, then reports metrics. Task-body
    failures never kill a worker; they are collected and re-raised at the
    barrier.
    """

    def __init__(
        self,
        nworkers: int,
        policy: Union[str, PolicyConfig] = "cilk",
        rng_seed: int = 0,
    ):
        if nworkers < 1:
            raise ValueError("nworkers must be >= 1")
        if isinstance(policy, str):
            policy = PolicyConfig(policy)
        self.nworkers = nworkers
        self.policy = policy
        self.rng_seed = rng_seed
        self.queues = tuple(policy.make_queue() for _ in range(nworkers))
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._outstanding = 0
        self._spawned = 0
        self._parked = 0
        self._shutdown = False
        self._failures: list = []
        self._stats = [_WorkerStats() for _ in range(nworkers)]
        self._threads = []
        try:
            for i in range(nworkers):
                t = threading.Thread(
                    target=self._worker_loop,
                    args=(i,),
                    name=f"taskmine-worker-{i}",
                    daemon=True,
                )
                t.start()
                self._threads.append(t)
        except BaseException:
            self.shutdown()
            raise

    # -- coordinator / spawner side ------------------------------------

    def spawn(self, task: Task) -> int:
        """Enqueue ``task`` and return its spawn id (1-based, monotone)."""
        target = task.attrs.affinity
        if target is None:
            target = current_worker(self)
            if target is None:
                target = 0
        elif not 0 <= target < self.nworkers:
            raise ValueError(
                f"affinity {target} out of range for {self.nworkers} workers"
            )
        with self._lock:
            if self._shutdown:
                raise RuntimeError("spawn after pool shutdown")
            self._outstanding += 1
            self._spawned += 1
            task_id = self._spawned
            if self._parked:
                self._cond.notify_all()
        self.queues[target].put(task)
        return task_id

    def wait_all(self) -> RunMetrics:
        """Block until all spawned tasks (transitively) completed.

        Returns a metrics snapshot; raises TaskFailuresError if any task body
        raised since the previous barrier (after draining the rest).
        """
        if current_worker(self) is not None:
            raise RuntimeError("wait_all must not be called from a pool worker")
        with self._cond:
            while self._outstanding:
                self._cond.wait()
            failures = self._failures
            self._failures = []
        metrics = self.metrics()
        if failures:
            raise TaskFailuresError(failures)
        return metrics

    def metrics(self) -> RunMetrics:
        return RunMetrics(
            tasks_executed=[s.tasks_executed for s in self._stats],
            steal_attempts=[s.steal_attempts for s in self._stats],
            steals_successful=[s.steals_successful for s in self._stats],
            tasks_stolen=[s.tasks_stolen for s in self._stats],
        )

    @property
    def outstanding(self) -> int:
        return self._outstanding

    @property
    def tasks_spawned(self) -> int:
        return self._spawned

    def shutdown(self) -> None:
        with self._cond:
            self._shutdown = True
            self._cond.notify_all()
        for t in self._threads:
            t.join()

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()

    # -- worker side -----------------------------------------------------

    def _worker_loop(self, index: int) -> None:
        _current.worker = (self, index)
        rng = random.Random(item_hash(item_hash(self.rng_seed) + index))
        own = self.queues[index]
        queues = self.queues
        stats = self._stats[index]
        nworkers = self.nworkers
        backoff = 0.0
        while True:
            if self._shutdown:
                return
            task = own.get()
            if task is not None:
                self._run(task, stats)
                backoff = 0.0
                continue
            if nworkers > 1:
                victim = pick_victim(rng, index, nworkers)
                stats.steal_attempts += 1
                batch = queues[victim].steal()
                if batch:
                    stats.steals_successful += 1
                    stats.tasks_stolen += len(batch)
                    for t in batch:
                        self._run(t, stats)
                    backoff = 0.0
                    continue
            with self._cond:
                if self._shutdown:
                    return
                if self._outstanding == 0:
                    self._parked += 1
                    self._cond.wait(timeout=_PARK_TIMEOUT)
                    self._parked -= 1
                    backoff = 0.0
                    continue
            # Work exists somewhere but could not be found: yield, then back
            # off exponentially so idle workers stop hammering the queues.
            time.sleep(backoff)
            backoff = min(backoff * 2 or _IDLE_SLEEP_MIN, _IDLE_SLEEP_MAX)

    def _run(self, task: Task, stats: _WorkerStats) -> None:
        exc = None
        try:
            task.work()
        except Exception as e:  # noqa: BLE001 - worker must survive task bodies
            exc = e
        stats.tasks_executed += 1
        with self._lock:
            if exc is not None:
                self._failures.append((task, exc))
            self._outstanding -= 1
            if self._outstanding == 0:
                self._cond.notify_all()
