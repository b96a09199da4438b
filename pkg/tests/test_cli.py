import json
import subprocess
import sys

import pytest

from drcr import skirental
from drcr.cli import run
from drcr.errors import NumericalFailure


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_full_delta(capsys):
    code, out, _ = call(capsys, "solve", "--B", "5", "--interval", "3:8:1.0")
    assert code == 0
    data = json.loads(out)
    assert data["drcr"] == pytest.approx(3125 / 2101, abs=1e-8)
    assert sum(data["distribution"].values()) == pytest.approx(1.0)


def test_solve_then_evaluate_round_trip(capsys, tmp_path):
    sol = tmp_path / "sol.json"
    code, _, _ = call(capsys, "solve", "--B", "6", "--interval", "4:6:0.5", "--interval", "2:9:0.1",
                      "--output", str(sol))
    assert code == 0
    solved = json.loads(sol.read_text())
    code, out, _ = call(capsys, "evaluate", "--B", "6", "--interval", "4:6:0.5", "--interval", "2:9:0.1",
                        "--dist", str(sol))
    assert code == 0
    assert json.loads(out)["drcr"] == pytest.approx(solved["drcr"], abs=1e-7)


def test_spec_file_input(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"B": 5, "intervals": [[3, 8]], "deltas": [1.0]}))
    code, out, _ = call(capsys, "solve", "--spec", str(path))
    assert code == 0 and json.loads(out)["drcr"] == pytest.approx(3125 / 2101, abs=1e-8)


def test_output_is_byte_deterministic(capsys):
    argv = ["curve", "--B", "5", "--interval", "3:8", "--grid", "0:1:0.1", "--format", "csv"]
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "delta,optimal_drcr" and len(lines) == 12


def test_curve_json_reports_shape(capsys):
    code, out, _ = call(capsys, "curve", "--B", "5", "--interval", "3:8", "--grid", "0:1:0.25")
    assert code == 0
    data = json.loads(out)
    assert data["shape"]["monotone_ok"] and data["shape"]["concave_ok"]
    assert len(data["points"]) == 5


def test_critical_with_check(capsys):
    code, out, _ = call(capsys, "critical", "--B", "5", "--interval", "3:8", "--check")
    data = json.loads(out)
    assert code == 0 and data["agree"]
    assert data["critical_delta"] == pytest.approx(data["bisection_delta"], abs=1e-6)


def test_feasible_plain_and_json(capsys):
    assert call(capsys, "feasible", "--B", "5", "--interval", "3:8", "--v", "1", "--delta", "0.5")[1] == "feasible\n"
    assert call(capsys, "feasible", "--B", "5", "--interval", "3:8", "--v", "1.6", "--delta", "0.5")[1] == "infeasible\n"
    code, out, _ = call(capsys, "feasible", "--B", "5", "--interval", "4:6", "--interval", "2:9",
                        "--v", "1.1", "--delta", "0.5,0.2", "--format", "json")
    assert code == 0 and json.loads(out)["deltas"] == [0.5, 0.2]


def test_robustness(capsys):
    code, out, _ = call(capsys, "robustness", "--B", "2")
    assert code == 0 and json.loads(out)["robustness_optimum"] == pytest.approx(4 / 3)


def test_dump_lp(capsys, tmp_path):
    path = tmp_path / "primal.lp"
    code, _, _ = call(capsys, "solve", "--B", "5", "--interval", "3:8:0.3", "--dump-lp", str(path))
    text = path.read_text()
    assert code == 0
    assert text.startswith("\\ reduced primal\nMinimize\n") and text.rstrip().endswith("End")
    code, _, err = call(capsys, "critical", "--B", "5", "--interval", "3:8", "--dump-lp", "-")
    assert code == 0 and "d_1" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--B", "5", "--interval", "4:6:0.1", "--interval", "2:9:0.5"],
        ["solve", "--B", "5", "--interval", "3:8:1.5"],
        ["solve", "--B", "1", "--interval", "3:8:0.5"],
        ["solve", "--B", "5", "--interval", "3:8"],
        ["solve", "--interval", "3:8:0.5"],
        ["solve", "--B", "5", "--interval", "3-8"],
        ["solve", "--B", "5", "--interval", "3:8:0.5", "--format", "csv"],
        ["curve", "--B", "5", "--interval", "3:8", "--grid", "0:1"],
        ["critical", "--B", "5", "--interval", "4:6", "--interval", "2:9"],
        ["evaluate", "--B", "5", "--interval", "3:8:0.5", "--dist", "/nonexistent.json"],
        ["bogus"],
    ],
)
def test_invalid_input_exits_one(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1
    assert out == "" and err.startswith("drcr:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "drcr", "robustness", "--B", "5"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["B"] == 5


def test_solver_failure_exits_two(capsys, monkeypatch):
    def broken(spec):
        raise NumericalFailure("pivot lost feasibility")

    monkeypatch.setattr(skirental, "optimal_drcr", broken)
    code, _, err = call(capsys, "solve", "--B", "5", "--interval", "3:8:0.5")
    assert code == 2 and "solver failure" in err
