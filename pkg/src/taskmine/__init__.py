"""Task-parallel Apriori miner with pluggable work-stealing queue policies."""

from .apriori import (
    Itemset,
    LevelResult,
    SupportThreshold,
    TransactionDB,
    VerticalIndex,
    build_vertical,
    count_support,
    generate_candidates,
    intersect,
    mine_parallel,
    mine_sequential,
)
from .fimi import (
    FimiParseError,
    StatsRecord,
    parse_fimi,
    render_itemsets,
    write_fimi,
    write_itemsets,
    write_stats,
)
from .policies import (
    DEFAULT_BUCKETS,
    POLICY_NAMES,
    CilkQueue,
    ClusteredQueue,
    FifoQueue,
    LifoQueue,
    PolicyConfig,
    PriorityTaskQueue,
    cluster_hash,
    item_hash,
)
from .runtime import (
    RunMetrics,
    Task,
    TaskAttributes,
    TaskFailuresError,
    WorkerPool,
    current_worker,
    pick_victim,
)

__version__ = "0.1.0"

__all__ = [
    "CilkQueue",
    "ClusteredQueue",
    "DEFAULT_BUCKETS",
    "FifoQueue",
    "FimiParseError",
    "Itemset",
    "LevelResult",
    "LifoQueue",
    "POLICY_NAMES",
    "PolicyConfig",
    "PriorityTaskQueue",
    "RunMetrics",
    "StatsRecord",
    "SupportThreshold",
    "Task",
    "TaskAttributes",
    "TaskFailuresError",
    "TransactionDB",
    "VerticalIndex",
    "WorkerPool",
    "build_vertical",
    "cluster_hash",
    "count_support",
    "current_worker",
    "generate_candidates",
    "intersect",
    "item_hash",
    "mine_parallel",
    "mine_sequential",
    "parse_fimi",
    "pick_victim",
    "render_itemsets",
    "write_fimi",
    "write_itemsets",
    "write_stats",
]
