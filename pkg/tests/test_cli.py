import json
import subprocess
import sys

import pytest

from cosetposet import scenarios
from cosetposet.cli import DEFAULT_SUITE, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sphericity_json(capsys):
    code, out, _ = run_cli(capsys, "sphericity", "--p", "2", "--r", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["scenario"] == "sphericity" and doc["params"] == {"p": 2, "r": 1}
    assert isinstance(doc["elapsed_ms"], int)
    assert doc["checks"] and all(set(c) == {"name", "status", "expected", "actual"} for c in doc["checks"])
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_no_timing_is_byte_stable(capsys):
    a = run_cli(capsys, "reduction", "--group", "Q8", "--no-timing")[1]
    b = run_cli(capsys, "reduction", "--group", "Q8", "--no-timing")[1]
    assert a == b and "elapsed_ms" not in a


def test_formulas_csv(capsys):
    code, out, _ = run_cli(capsys, "formulas", "--p", "3", "--r", "2", "--format", "csv")
    assert code == 0
    iso, wedge = out.strip().split("\n\n")
    assert iso.splitlines() == ["p,r,j,N_j,D_j", "3,2,0,1,81", "3,2,1,40,3", "3,2,2,40,1"]
    assert wedge.splitlines() == ["p,r,d,euler", "3,2,11042,11043"]


def test_report_csv(capsys):
    code, out, _ = run_cli(capsys, "tau", "--p", "2", "--r", "1", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "scenario,params,check,status,expected,actual"
    assert len(lines) > 1 and all(line.startswith("tau,") for line in lines[1:])


def test_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "formulas", "--p", "2", "--r", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["checks"][0]["actual"] == {"d": 5, "euler": -4}


def test_failing_check_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(scenarios, "n_isotropic", lambda p, r, j: -1)
    code, out, _ = run_cli(capsys, "formulas", "--p", "2", "--r", "1")
    assert code == 1
    assert any(c["status"] == "fail" for c in json.loads(out)["checks"])


@pytest.mark.parametrize("argv", [
    ["sphericity", "--p", "7", "--r", "1"],
    ["sphericity", "--p", "2", "--r", "3"],
    ["reduction", "--group", "heisenberg", "--p", "2", "--r", "1"],
    ["sphericity", "--p", "5", "--r", "2"],
])
def test_guards_skip_with_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert "reason" in json.loads(out)
    assert err.startswith("skipped")


def test_heavy_case_without_long_reports_euler_only(capsys):
    code, out, err = run_cli(capsys, "sphericity", "--p", "3", "--r", "2", "--no-timing")
    doc = json.loads(out)
    names = {c["name"]: c for c in doc["checks"]}
    assert names["euler"]["actual"] == 11043
    assert code in (0, 2)
    assert all(c["status"] != "fail" for c in doc["checks"])


def test_bad_arguments():
    with pytest.raises(SystemExit):
        main(["nonsense"])
    with pytest.raises(SystemExit):
        main(["reduction", "--group", "S3"])


def test_suite_deterministic_across_jobs(tmp_path):
    outs = []
    for jobs in ("1", "2", "2"):
        target = tmp_path / f"suite{len(outs)}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "cosetposet", "suite", "--no-timing", "--jobs", jobs, "--out", str(target)],
            capture_output=True, text=True, timeout=600,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(target.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    docs = json.loads(outs[0])
    assert [d["scenario"] for d in docs] == [name for name, _ in DEFAULT_SUITE]
