"""End-to-end CLI tests over temp files."""

import json

import pytest

from taskmine import LevelResult
from taskmine.cli import main

TOY = "1 2\n1 2\n1\n2\n1 2\n3\n1\n2\n"  # 8 transactions


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.dat"
    path.write_text(TOY)
    return path


def test_mine_writes_itemsets_and_stats(toy_file, tmp_path):
    out = tmp_path / "items.txt"
    stats = tmp_path / "stats.json"
    code = main(
        [
            "mine",
            "--input",
            str(toy_file),
            "--minsup",
            "0.25",
            "--policy",
            "cilk",
            "--threads",
            "2",
            "--out",
            str(out),
            "--stats",
            str(stats),
        ]
    )
    assert code == 0
    # ceil(0.25 * 8) = 2, echoed in the stats record
    tree = json.loads(stats.read_text())
    assert tree["resolved_threshold"] == 2
    assert tree["minsup_fraction"] == 0.25
    assert tree["policy"] == "cilk"
    assert len(tree["workers"]) == 2
    text = out.read_text()
    assert "1 2 (3)" in text
    assert "3 (1)" not in text  # item 3 is below threshold


def test_policies_produce_identical_output(toy_file, tmp_path):
    outputs = []
    for policy in ("clustered", "cilk"):
        out = tmp_path / f"{policy}.txt"
        code = main(
            [
                "mine",
                "--input",
                str(toy_file),
                "--minsup-count",
                "2",
                "--policy",
                policy,
                "--threads",
                "8",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_bad_policy_is_usage_error(toy_file):
    with pytest.raises(SystemExit) as excinfo:
        main(
            [
                "mine",
                "--input",
                str(toy_file),
                "--minsup",
                "0.5",
                "--policy",
                "roundrobin",
            ]
        )
    assert excinfo.value.code == 2


def test_minsup_flags_are_exclusive(toy_file):
    with pytest.raises(SystemExit) as excinfo:
        main(
            [
                "mine",
                "--input",
                str(toy_file),
                "--minsup",
                "0.5",
                "--minsup-count",
                "2",
            ]
        )
    assert excinfo.value.code == 2


def test_missing_input_reports_diagnostic(tmp_path, capsys):
    code = main(
        ["mine", "--input", str(tmp_path / "nope.dat"), "--minsup", "0.5"]
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.dat"
    bad.write_text("1 2\n3 x\n")
    code = main(["mine", "--input", str(bad), "--minsup", "0.5"])
    assert code == 2
    assert "line 2" in capsys.readouterr().err


def test_bench_reports_and_verifies(toy_file, tmp_path, capsys):
    stats = tmp_path / "bench.json"
    out = tmp_path / "bench_items.txt"
    code = main(
        [
            "bench",
            "--input",
            str(toy_file),
            "--minsup-count",
            "2",
            "--policies",
            "cilk,clustered",
            "--threads",
            "2",
            "--repeats",
            "3",
            "--stats",
            str(stats),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    captured = capsys.readouterr().out
    assert "normalized to first policy (cilk)" in captured
    tree = json.loads(stats.read_text())
    assert tree["outputs_identical"] is True
    assert tree["normalized_baseline"] == "cilk"
    assert [p["policy"] for p in tree["policies"]] == ["cilk", "clustered"]
    assert tree["policies"][0]["normalized"] == 1.0
    for policy in tree["policies"]:
        assert len(policy["runs"]) == 3
        stolen = policy["median_tasks_stolen"]
        steals = policy["median_steals_successful"]
        assert stolen >= steals
    assert "1 2 (3)" in out.read_text()


def test_bench_default_runs_all_policies(toy_file, tmp_path):
    stats = tmp_path / "bench.json"
    code = main(
        [
            "bench",
            "--input",
            str(toy_file),
            "--minsup-count",
            "2",
            "--threads",
            "1",
            "--repeats",
            "1",
            "--stats",
            str(stats),
        ]
    )
    assert code == 0
    tree = json.loads(stats.read_text())
    assert [p["policy"] for p in tree["policies"]] == [
        "cilk",
        "fifo",
        "lifo",
        "priority",
        "clustered",
    ]


def test_bench_detects_output_mismatch(toy_file, monkeypatch, capsys):
    import taskmine.cli as cli_mod

    calls = {"n": 0}
    real = cli_mod.mine_parallel

    def flaky(db, minsup, pool, **kwargs):
        calls["n"] += 1
        if calls["n"] == 3:
            return [LevelResult(1, [((1,), 999)], 1)]
        return real(db, minsup, pool, **kwargs)

    monkeypatch.setattr(cli_mod, "mine_parallel", flaky)
    code = main(
        [
            "bench",
            "--input",
            str(toy_file),
            "--minsup-count",
            "2",
            "--policies",
            "cilk,fifo",
            "--threads",
            "2",
            "--repeats",
            "2",
        ]
    )
    assert code == 1
    assert "mismatch" in capsys.readouterr().err
