"""Dataset parsing and artifact writer tests."""

import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taskmine import (
    FimiParseError,
    LevelResult,
    SupportThreshold,
    TransactionDB,
    WorkerPool,
    mine_parallel,
    parse_fimi,
    render_itemsets,
    write_fimi,
    write_itemsets,
    write_stats,
)
from taskmine.fimi import stats_record_from_run


class TestParseFimi:
    def test_basic(self):
        db = parse_fimi("1 2 5\n2 3\n")
        assert db.transactions == [(1, 2, 5), (2, 3)]
        assert db.m == 2
        assert db.n_items == 4

    def test_dedup_and_sort(self):
        db = parse_fimi("3 1 1 2\n")
        assert db.transactions == [(1, 2, 3)]

    def test_non_integer_token(self):
        with pytest.raises(FimiParseError) as excinfo:
            parse_fimi("1 x 2\n")
        assert excinfo.value.line_no == 1
        assert "x" in str(excinfo.value)

    def test_negative_item(self):
        with pytest.raises(FimiParseError) as excinfo:
            parse_fimi("1 2\n5 -3\n")
        assert excinfo.value.line_no == 2

    def test_blank_lines_skipped_line_numbers_kept(self):
        db = parse_fimi("1 2\n\n   \n3\n")
        assert db.transactions == [(1, 2), (3,)]
        with pytest.raises(FimiParseError) as excinfo:
            parse_fimi("1 2\n\n3 y\n")
        assert excinfo.value.line_no == 3

    def test_trailing_whitespace_tolerated(self):
        db = parse_fimi("1 2 \n 3\t4\t\n")
        assert db.transactions == [(1, 2), (3, 4)]

    def test_accepts_line_iterables(self):
        db = parse_fimi(iter(["1 2\n", "3\n"]))
        assert db.transactions == [(1, 2), (3,)]

    def test_empty_input(self):
        assert parse_fimi("").transactions == []


nonempty_transactions = st.lists(
    st.lists(
        st.integers(min_value=0, max_value=999), min_size=1, max_size=8
    ),
    max_size=20,
)


@given(nonempty_transactions)
def test_round_trip(rows):
    """serialize -> parse is the identity on normalized databases (empty
    transactions are not representable in the line format)."""
    db = TransactionDB.from_rows(rows)
    buf = io.StringIO()
    write_fimi(db, buf)
    assert parse_fimi(buf.getvalue()).transactions == db.transactions


class TestWriteItemsets:
    def test_format(self):
        levels = [LevelResult(2, [((1, 3), 4)], 1)]
        buf = io.StringIO()
        write_itemsets(levels, buf)
        assert buf.getvalue() == "1 3 (4)\n"

    def test_empty(self):
        assert render_itemsets([]) == ""
        assert render_itemsets([LevelResult(1, [], 5)]) == ""

    def test_level_then_lex_order(self):
        levels = [
            LevelResult(1, [((1,), 3), ((2,), 2)], 2),
            LevelResult(2, [((1, 2), 2)], 1),
        ]
        assert render_itemsets(levels) == "1 (3)\n2 (2)\n1 2 (2)\n"


def _mine_record(policy="cilk", nworkers=2):
    db = TransactionDB.from_rows([[1, 2, 3], [1, 2], [1, 2], [2, 3]])
    minsup = SupportThreshold(count=2)
    timings = {}
    with WorkerPool(nworkers, policy, rng_seed=4) as pool:
        levels = mine_parallel(db, minsup, pool, timings_out=timings)
        metrics = pool.metrics()
        spawned = pool.tasks_spawned
    return (
        stats_record_from_run(
            dataset="toy.dat",
            policy=policy,
            minsup=minsup,
            resolved_threshold=minsup.resolve(db.m),
            seed=4,
            affinity="local",
            nbuckets=None,
            levels=levels,
            level_seconds=timings,
            total_seconds=sum(timings.values()),
            metrics=metrics,
            tasks_spawned=spawned,
        ),
        levels,
    )


class TestWriteStats:
    def test_one_entry_per_worker(self):
        record, _ = _mine_record(nworkers=8)
        buf = io.StringIO()
        write_stats(record, buf)
        tree = json.loads(buf.getvalue())
        assert len(tree["workers"]) == 8
        assert tree["nworkers"] == 8
        assert tree["resolved_threshold"] == 2

    def test_single_worker_never_steals(self):
        record, _ = _mine_record(nworkers=1)
        assert record.workers[0].steals_successful == 0
        assert record.workers[0].tasks_stolen == 0

    def test_executed_matches_candidates(self):
        record, levels = _mine_record(nworkers=4)
        executed = sum(w.tasks_executed for w in record.workers)
        counting_tasks = sum(lv.candidates_counted for lv in levels if lv.k >= 2)
        assert executed == counting_tasks == record.tasks_spawned

    def test_schema_fields_stable(self):
        record, _ = _mine_record()
        buf = io.StringIO()
        write_stats(record, buf)
        tree = json.loads(buf.getvalue())
        assert set(tree) == {
            "dataset",
            "policy",
            "nworkers",
            "minsup_fraction",
            "minsup_count",
            "resolved_threshold",
            "seed",
            "affinity",
            "nbuckets",
            "total_seconds",
            "tasks_spawned",
            "levels",
            "workers",
        }
        assert set(tree["levels"][0]) == {"k", "candidates", "frequent", "seconds"}
        assert set(tree["workers"][0]) == {
            "worker",
            "tasks_executed",
            "steal_attempts",
            "steals_successful",
            "tasks_stolen",
        }
