from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from imchit import save_model
from imchit.cli import main
from modelzoo import gambler_model, isolated_cycle_model, line_model, precise_model


@pytest.fixture
def gambler_path(tmp_path):
    path = tmp_path / "gambler.json"
    save_model(gambler_model(4), path)
    return str(path)


def _without_wall_time(text: str) -> str:
    return "\n".join(line for line in text.splitlines()
                     if "wall_time_s" not in line)


def test_validate_ok(gambler_path, capsys):
    assert main(["validate", "--model", gambler_path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"ok": True, "issues": []}


def test_validate_reports_issues(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "states": ["a", "b"], "target": ["b"],
        "rows": {"a": {"vertices": [[0.5, 0.6]]},
                 "b": {"vertices": [[0.0, 1.0]]}}}))
    assert main(["validate", "--model", str(path)]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert not doc["ok"]
    assert doc["issues"][0]["code"] == "NonStochasticVertex"
    assert doc["issues"][0]["state"] == "a"


def test_reach_on_line_chain(tmp_path, capsys):
    path = tmp_path / "line.json"
    save_model(line_model(), path)
    assert main(["reach", "--model", str(path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["holds"] is True
    assert doc["reach_step"] == {"0": 3, "1": 2, "2": 1, "3": 0}
    assert doc["violating"] == []


def test_reach_failure_exits_one(tmp_path, capsys):
    path = tmp_path / "cycle.json"
    save_model(isolated_cycle_model(), path)
    assert main(["reach", "--model", str(path)]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["holds"] is False
    assert doc["violating"] == ["c", "d"]
    assert doc["reach_step"]["c"] is None


def test_solve_gambler_closed_form(gambler_path, capsys):
    assert main(["solve", "--model", gambler_path, "--method", "policy",
                 "--bound", "lower"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["states"] == ["s0", "s1", "s2", "s3", "s4"]
    assert np.allclose(doc["values"], [0.0, 3.0, 4.0, 3.0, 0.0], atol=1e-10)
    assert doc["method"] == "policy" and doc["bound"] == "lower"
    assert not doc["tolerance_limited"]
    assert "trace" not in doc


def test_solve_precise_chain_matches_linear_solve(tmp_path, capsys, rng):
    from imchit import initial_policy, policy_to_matrix, solve_precise

    m = precise_model(rng.dirichlet(np.ones(3), size=3), {2})
    path = tmp_path / "precise.json"
    save_model(m, path)
    expected = solve_precise(policy_to_matrix(m, initial_policy(m, "first")),
                             m.target).values
    for method in ("policy", "value", "brute"):
        assert main(["solve", "--model", str(path), "--method", method]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert np.allclose(doc["values"], expected, atol=1e-6)


def test_solve_trace_flag(gambler_path, capsys):
    assert main(["solve", "--model", gambler_path, "--trace"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert isinstance(doc["trace"], list) and doc["trace"]
    assert {"sup_norm", "policy_changes"} == set(doc["trace"][0])


def test_solve_output_is_deterministic(gambler_path, capsys):
    main(["solve", "--model", gambler_path, "--method", "policy", "--trace"])
    first = capsys.readouterr().out
    main(["solve", "--model", gambler_path, "--method", "policy", "--trace"])
    second = capsys.readouterr().out
    assert _without_wall_time(first) == _without_wall_time(second)


def test_solve_reachability_failure_exits_one(tmp_path, capsys):
    path = tmp_path / "cycle.json"
    save_model(isolated_cycle_model(), path)
    assert main(["solve", "--model", str(path)]) == 1
    assert "ReachabilityViolation" in capsys.readouterr().err


def test_solve_on_invalid_model_exits_one(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "states": ["a", "b"], "target": ["b"],
        "rows": {"a": {"vertices": [[0.5, 0.6]]},
                 "b": {"vertices": [[0.0, 1.0]]}}}))
    assert main(["solve", "--model", str(path)]) == 1
    assert "NonStochasticVertex" in capsys.readouterr().err


def test_non_convergence_exits_one(gambler_path, capsys):
    assert main(["solve", "--model", gambler_path, "--method", "value",
                 "--max-iter", "1"]) == 1
    assert "MaxIterationsExceeded" in capsys.readouterr().err


def test_missing_file_is_domain_error(tmp_path, capsys):
    assert main(["solve", "--model", str(tmp_path / "nope.json")]) == 1
    assert "error" in capsys.readouterr().err


def test_unparsable_file_is_domain_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["validate", "--model", str(path)]) == 1
    assert "error" in capsys.readouterr().err


def test_usage_errors_exit_two(gambler_path):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--model", gambler_path, "--method", "wizardry"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--model", gambler_path, "--frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_bench_writes_csv_and_histogram(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    hist = tmp_path / "hist.json"
    assert main(["bench", "--sizes", "6,8", "--vertices", "3", "--trials", "2",
                 "--seed", "5", "--out", str(out), "--hist", str(hist),
                 "--jobs", "2"]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["size", "trial", "iterations", "residual",
                       "wall_time_s", "regenerations", "seed_used"]
    assert len(rows) == 1 + 4
    doc = json.loads(hist.read_text())
    assert set(doc) == {"6", "8"}
    assert "wrote 4 records" in capsys.readouterr().out


def test_bench_rejects_bad_sizes(tmp_path, capsys):
    assert main(["bench", "--sizes", "6;8", "--out",
                 str(tmp_path / "x.csv")]) == 1
    assert "error" in capsys.readouterr().err
