"""CLI subcommands, exit codes, and output determinism."""

import json

import pytest

from motifdiff.cli import _default_threads, main
from motifdiff.dataio import read_dataset, write_dataset
from motifdiff.graphs import Dataset, Graph


def run(argv):
    return main(argv)


@pytest.fixture()
def train_path(tmp_path):
    path = tmp_path / "train.jsonl"
    rc = run(["gen-data", "--pattern", "c3", "--n", "4", "--count", "6",
              "--seed", "7", "--out", str(path)])
    assert rc == 0
    return str(path)


def test_count_report(train_path, tmp_path, capsys):
    out = tmp_path / "counts.json"
    rc = run(["count", "--in", train_path, "--patterns", "c3,c4",
              "--threads", "1", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["n_graphs"] == 6
    assert report["config"] == {"input": train_path, "patterns": "c3,c4"}
    c3 = report["patterns"]["c3"]
    assert c3["per_graph"] == [1] * 6
    assert c3["histogram"]["mass"] == {"1": 1.0}
    assert c3["histogram"]["sample_size"] == 6
    err = capsys.readouterr().err
    assert "counted 2 pattern(s)" in err


def test_count_error_paths(train_path, capsys):
    assert run(["count", "--in", train_path, "--patterns", "c99"]) == 2
    assert "error:" in capsys.readouterr().err
    assert run(["count", "--in", train_path, "--patterns", " , "]) == 2
    assert run(["count", "--in", train_path, "--patterns", "c3,c3"]) == 2


def test_count_missing_file_is_not_swallowed(train_path):
    # an OS-level failure is not a domain error; it propagates
    with pytest.raises(OSError):
        run(["count", "--in", "/nonexistent.jsonl", "--patterns", "c3"])


def test_gen_data_deterministic_bytes(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    for out in (a, b):
        rc = run(["gen-data", "--pattern", "c4", "--n", "6", "--count", "5",
                  "--seed", "11", "--out", str(out)])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(["gen-data", "--pattern", "c4", "--n", "6", "--count", "0",
                "--out", str(a)]) == 2


def test_sample_deterministic_and_trajectories(train_path, tmp_path):
    outs, trajs = [], []
    for tag in ("x", "y"):
        out = tmp_path / f"gen_{tag}.jsonl"
        traj = tmp_path / f"traj_{tag}.jsonl"
        rc = run(["sample", "--train", train_path, "--num-samples", "3",
                  "--steps", "12", "--seed", "5", "--threads", "1",
                  "--trajectories", str(traj), "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
        trajs.append(traj.read_bytes())
    assert outs[0] == outs[1]
    assert trajs[0] == trajs[1]
    ds = read_dataset(tmp_path / "gen_x.jsonl")
    assert len(ds) == 3
    assert ds.node_counts() == (4,)
    assert ds.metadata["generator"] == "reverse-diffusion"
    assert ds.metadata["steps"] == "12"
    assert "threads" not in ds.metadata  # thread count never reaches outputs
    lines = (tmp_path / "traj_x.jsonl").read_text().splitlines()
    assert len(lines) == 3 * 13  # per sample: one state per step plus final
    first = json.loads(lines[0])
    assert set(first) == {"sample", "t", "W"}
    assert first["t"] == pytest.approx(1.0)


def test_sample_requires_n_for_mixed_sizes(tmp_path):
    mixed = tmp_path / "mixed.jsonl"
    write_dataset(Dataset(graphs=(Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]),
                                  Graph.from_edges(4, [(0, 1)]))), mixed)
    rc = run(["sample", "--train", str(mixed), "--num-samples", "1",
              "--steps", "10", "--out", str(tmp_path / "g.jsonl")])
    assert rc == 2
    rc = run(["sample", "--train", str(mixed), "--n", "3", "--num-samples", "1",
              "--steps", "10", "--threads", "1",
              "--out", str(tmp_path / "g.jsonl")])
    assert rc == 0


def test_sample_series_divergence_exits_cleanly(train_path, tmp_path, capsys):
    out = str(tmp_path / "g.jsonl")
    # beyond its convergent regime the series mode must fail loudly
    rc = run(["sample", "--train", train_path, "--num-samples", "1",
              "--steps", "200", "--score", "series", "--seed", "0",
              "--threads", "1", "--out", out])
    assert rc == 2
    assert "ratio" in capsys.readouterr().err
    # a tiny ratio cap trips on the very first step, deterministically
    rc = run(["sample", "--train", train_path, "--num-samples", "1",
              "--steps", "10", "--score", "series", "--series-ratio-max",
              "1e-9", "--seed", "0", "--threads", "1", "--out", out])
    assert rc == 2


def test_sample_validates_num_samples(train_path, tmp_path):
    assert run(["sample", "--train", train_path, "--num-samples", "0",
                "--steps", "10", "--out", str(tmp_path / "g.jsonl")]) == 2


def test_eval_self_comparison(train_path, tmp_path):
    out = tmp_path / "eval.json"
    rc = run(["eval", "--train", train_path, "--gen", train_path,
              "--patterns", "c3,c4,l5", "--threads", "1", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert set(report["patterns"]) == {"c3", "c4", "l5"}
    for pe in report["patterns"].values():
        assert pe["tv"] == 0.0
    assert report["novelty"] == 0.0
    assert report["config"]["train"] == train_path
    assert report["config"]["gen"] == train_path


def test_verify_suite_reports(tmp_path, capsys):
    out = tmp_path / "verify.json"
    rc = run(["verify", "--suite", "basis", "--n", "3", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    (suite,) = report["suites"]
    assert suite["suite"] == "basis"
    assert suite["params"]["n_values"] == [3]
    assert "basis: ok" in capsys.readouterr().err


def test_verify_failure_exit_code(tmp_path):
    # an impossible tolerance must flip the exit code, not hide the miss
    rc = run(["verify", "--suite", "basis", "--n", "3",
              "--tolerance", "1e-18", "--out", str(tmp_path / "v.json")])
    assert rc == 1
    report = json.loads((tmp_path / "v.json").read_text())
    assert report["passed"] is False


def test_verify_count_identity_overrides(tmp_path):
    out = tmp_path / "v.json"
    rc = run(["verify", "--suite", "count-identity", "--n", "4",
              "--trials", "20", "--seed", "1", "--out", str(out)])
    assert rc == 0
    (suite,) = json.loads(out.read_text())["suites"]
    assert suite["params"]["n_max"] == 4
    assert suite["params"]["trials"] == 20
    assert suite["tolerance"] == 0.0


def test_verify_unknown_suite_is_a_usage_error():
    with pytest.raises(SystemExit):
        run(["verify", "--suite", "everything"])


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("MOTIFDIFF_THREADS", "3")
    assert _default_threads() == 3
    monkeypatch.setenv("MOTIFDIFF_THREADS", "0")
    assert _default_threads() == 1
    monkeypatch.setenv("MOTIFDIFF_THREADS", "banana")
    assert run(["verify", "--suite", "basis", "--n", "3"]) == 2


def test_stdout_emission(train_path, capsys):
    rc = run(["count", "--in", train_path, "--patterns", "c3", "--threads", "1"])
    assert rc == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["patterns"]["c3"]["per_graph"] == [1] * 6
    assert captured.out.endswith("\n")
