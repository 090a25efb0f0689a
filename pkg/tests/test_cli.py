import json
import subprocess
import sys

import pytest

from skeinrec.cli import main

RUN = [sys.executable, "-m", "skeinrec.cli"]


def run_cli(*args):
    return subprocess.run(RUN + list(args), capture_output=True, text=True)


def test_solve_json_round_trip(tmp_path):
    out = tmp_path / "ll.json"
    rc = main(["solve", "--filling", "ll", "--max-boxes", "2",
               "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert {"l1": [], "m1": [], "l2": [], "m2": [],
            "coeff": "(1) * a^0 * aL1^0 * aL2^0"} in data["terms"]


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["table", "--filling", "ll", "--max-boxes", "3",
                     "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_table_formats(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table", "--max-boxes", "2", "--format", "csv",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "lam,mu,coeff"
    assert len(lines) > 3


def test_usage_errors():
    assert main(["verify", "--check", "no-such-check"]) == 64
    assert main(["solve", "--max-boxes", "3"]) == 64
    assert main(["solve", "--filling", "ll", "--max-boxes", "-1"]) == 64


def test_solver_error_exit_code():
    assert main(["solve", "--filling", "dd", "--max-boxes", "2"]) == 2


def test_verify_single_checks(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["verify", "--check", "u1", "--check", "classical",
               "--check", "commutator", "--max-boxes", "2",
               "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["ok"] and len(rep["checks"]) == 3
    assert {c["name"] for c in rep["checks"]} \
        == {"u1", "classical", "commutator"}


def test_verify_annihilation_subprocess():
    r = run_cli("verify", "--check", "annihilation", "--filling", "lm",
                "--max-boxes", "3")
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    assert rep["ok"]


def test_verify_jobs_flag(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["verify", "--check", "u1", "--check", "classical",
               "--jobs", "2", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["ok"]


def test_solve_l0_is_unit():
    r = run_cli("solve", "--filling", "l0", "--max-boxes", "5",
                "--format", "text")
    assert r.returncode == 0
    assert r.stdout.strip() == "W[[],[]] (x) W[[],[]]: (1) * a^0 * aL1^0 * aL2^0"
