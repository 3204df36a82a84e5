import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from torusqm import cli


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zeros(capsys):
    code, out, _ = run(["zeros", "--m", "0", "--count", "5"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert rows[0]["zero"].startswith("2.40482555769577")
    assert len(rows[1]["zero"].replace(".", "").lstrip("0")) >= 16


def test_grid_shell(capsys):
    code, out, _ = run(["grid", "--family", "well", "--m", "0", "--n", "1", "--a", "1", "--R", "1",
                        "--surface", "w=1"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "w,u,v,x,y,z,re,im,density,mask"
    dens = np.array([float(r.split(",")[8]) for r in lines[1:]])
    assert len(dens) == 33 * 33 and np.all(dens <= 1e-12)


def test_grid_json_and_threads(capsys, monkeypatch):
    args = ["grid", "--family", "free", "--m", "1", "--k", "2", "--w", "0:1.4:5", "--nu", "8", "--nv", "3",
            "--format", "json"]
    _, a, _ = run(args, capsys)
    monkeypatch.setenv("TORUSQM_THREADS", "3")
    _, b, _ = run(args, capsys)
    assert a == b
    data = json.loads(a)
    assert data["columns"][-1] == "mask" and data["metadata"]["state"]["family"] == "free"
    masked = [r for r in data["rows"] if r[-1] == 1]
    assert masked and all(r[8] is None for r in masked)


def test_verify_deterministic_and_exit(capsys):
    code1, a, _ = run(["verify", "--suite", "all", "--seed", "7"], capsys)
    code2, b, _ = run(["verify", "--suite", "all", "--seed", "7"], capsys)
    assert code1 == code2 == 0 and a == b
    assert a.strip().endswith("overall: PASS seed=7")


def test_verify_failure_exit(capsys, monkeypatch):
    from torusqm import verify
    monkeypatch.setitem(verify.SUITES, "free", lambda seed: [verify.SuiteResult("free.fake", False, 1.0, 0.0)])
    code, out, _ = run(["verify", "--suite", "free"], capsys)
    assert code == 3 and "FAIL" in out


def test_validation_errors(capsys):
    assert run(["eval", "--family", "well", "--a", "2", "--point", "0.1,0,0"], capsys)[0] == 2
    assert run(["eval", "--family", "free"], capsys)[0] == 2
    code, _, err = run(["nonsense"], capsys)
    assert code == 2 and "usage" in err
    assert run(["grid", "--surface", "u=1"], capsys)[0] == 2
    assert run(["green", "--field", "0.5,0,0", "--source", "0.5,0,0"], capsys)[0] == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# example\ngeometry.R = 2\nstate.family = free\nstate.m = 1\nstate.k = 1.5\n")
    _, a, _ = run(["eval", "--config", str(cfg), "--point", "0.5,0,0"], capsys)
    _, b, _ = run(["eval", "--R", "2", "--m", "1", "--k", "1.5", "--point", "0.5,0,0"], capsys)
    assert a == b
    _, c, _ = run(["eval", "--config", str(cfg), "--m", "2", "--point", "0.5,0,0"], capsys)
    assert c != a
    bad = tmp_path / "bad.cfg"
    bad.write_text("state.bogus = 1\n")
    assert run(["eval", "--config", str(bad), "--point", "0.5,0,0"], capsys)[0] == 2


def test_eval_moonspencer(capsys):
    code, out, _ = run(["eval", "--family", "moonspencer", "--k", "1", "--point", "1,1.5707963267948966,0"], capsys)
    assert code == 0 and out.splitlines()[0] == "tau,theta,phi,re,im,abs"


def test_green_planewave_report(capsys):
    code, out, _ = run(["green", "--k", "1.3"], capsys)
    ratio = [r for r in out.splitlines() if r.startswith("ratio")][0].split(",")
    assert code == 0 and float(ratio[2]) == pytest.approx(-8 * np.pi, rel=1e-10)
    code, out, _ = run(["planewave", "--k", "2", "--vk", "0"], capsys)
    assert code == 0
    code, out, _ = run(["report", "--k", "1.3", "--pairs", "30"], capsys)
    assert code == 0 and "ratio variance" in out


def test_output_file(tmp_path, capsys):
    target = tmp_path / "z.csv"
    assert run(["zeros", "--m", "1", "--count", "3", "-o", str(target)], capsys)[0] == 0
    assert target.read_text().startswith("m,n,zero\n1,1,3.83170597020751")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "torusqm", "zeros", "--count", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and "2.40482555769577" in out.stdout
