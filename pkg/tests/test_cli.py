import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from snakecr import report as rp
from snakecr.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, run_command


@pytest.fixture(autouse=True)
def out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(rp.OUT_ENV, str(tmp_path))
    return tmp_path


def test_verify_model_passes():
    text, code, rep = run_command(["verify-model", "--points", "20"])
    assert code == EXIT_OK
    assert rep["schema"] == rp.SCHEMA
    assert rep["summary"]["fail"] == 0
    assert json.loads(text) == rep


@pytest.mark.parametrize("argv", [
    ["verify-model", "--s2", "0.5"],
    ["verify-model", "--s2", "0"],
    ["verify-model", "--s1", "-1"],
    ["solve-J", "--s1", "abc"],
    ["nonsense"],
    [],
    ["simulate", "--u", "1,1"],
    ["sweep", "--grid", "1,x"],
])
def test_usage_errors(argv):
    assert run_command(argv)[1] == EXIT_USAGE


def test_usage_error_exit_code_from_main(capsys):
    assert main(["verify-model", "--s2", "1.5"]) == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_solve_j_empty_is_conclusive():
    _, code, rep = run_command(["solve-J", "--s2", "1/3"])
    assert code == EXIT_OK
    assert rep["data"]["solution_set"] == "empty"


def test_solve_j_reference_pair():
    _, code, rep = run_command(["solve-J"])
    assert code == EXIT_OK
    sols = rep["data"]["solution_set"]
    assert len(sols) == 2
    # rationals are "p/q" strings
    assert all(isinstance(x, str) for row in sols[0] for x in row)


def test_coframe_reports_holomorphy_failure():
    _, code, rep = run_command(["coframe", "--points", "3"])
    failed = [c["id"] for c in rep["checks"] if c["status"] == "fail"]
    assert code == EXIT_FAIL
    assert failed == ["holomorphic_orientation"]


def test_invariants_single_point():
    _, code, rep = run_command(["invariants", "--points", "1"])
    statuses = {c["id"]: c["status"] for c in rep["checks"]}
    assert statuses["fit_residual"] == "pass"
    assert statuses["dJ_relation"] == "pass"
    assert statuses["J_vanishing"] == "pass"


def test_sweep_isolates_failing_cells():
    _, code, rep = run_command(["sweep", "--grid", "0,1", "--points", "1"])
    cells = rep["data"]["cells"]
    assert code == EXIT_FAIL
    assert [c["status"] for c in cells] == ["error", "ok"]


def test_empty_sweep():
    assert run_command(["sweep", "--grid", ""])[1] == EXIT_OK


def test_simulate_writes_outputs(out_dir, tmp_path):
    ctrl = tmp_path / "u.csv"
    ctrl.write_text("t,u1,u2\n0,1,0\n0.5,0,1\n1,0,0\n")
    assert main(["simulate", "--controls", str(ctrl), "--dt", "0.01", "--quiet"]) == EXIT_OK
    assert (out_dir / "trajectory.csv").exists()
    rep = json.loads((out_dir / "simulate.json").read_text())
    assert rep["data"]["drift"]["steps"] == 101


def test_simulate_require_generic_fails_at_straight_pose():
    _, code, _ = run_command(["simulate", "--q0", "0,0,0,0,0", "--u", "0,1", "--T", "0.1", "--dt", "0.01",
                              "--require-generic", "--out", os.devnull])
    assert code == EXIT_FAIL


def test_default_report_path(out_dir):
    assert main(["verify-model", "--points", "5", "--quiet"]) == EXIT_OK
    assert (out_dir / "verify-model.json").exists()


def test_explicit_report_path(tmp_path):
    target = tmp_path / "sub" / "r.json"
    main(["report", "--criteria", "1,4", "--out", str(target), "--quiet"])
    rep = json.loads(target.read_text())
    assert [c["criterion"] for c in rep["checks"]] == [1, 4]


def test_timing_is_opt_in():
    assert "timing_seconds" not in run_command(["verify-model", "--points", "5"])[2]
    assert "timing_seconds" in run_command(["verify-model", "--points", "5", "--timing"])[2]


def test_byte_identical_across_processes(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        subprocess.run([sys.executable, "-m", "snakecr.cli", "verify-model", "--points", "20", "--seed", "7",
                        "--out", str(p), "--quiet"], check=True)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_serialization_rules():
    assert rp.to_jsonable(Fraction(-3, 4)) == "-3/4"
    assert rp.to_jsonable(1 + 2j) == [1.0, 2.0]
    assert rp.to_jsonable(float("inf")) == "inf"
    with pytest.raises(TypeError):
        rp.to_jsonable(object())
    with pytest.raises(ValueError):
        rp.build_report("x", {}, [rp.Check("a", "pass"), rp.Check("a", "fail")])
