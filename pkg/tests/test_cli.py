import csv
import io
import json
import subprocess
import sys
import time

import pytest

from lorgeo.cli import run
from lorgeo.families import build_family
from lorgeo.report import classify, dumps, scalar_text, to_csv, to_jsonable
from lorgeo.scan import GridError, evaluate, grid_points, parse_axis

G5 = ["--family", "g5", "--alpha", "1", "--beta", "2", "--gamma=-4", "--delta", "2"]


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json_report(capsys):
    code, out, _ = _run(capsys, "classify", *G5, "--samples", "50")
    assert code == 0
    doc = json.loads(out)
    assert list(doc)[0] == "schema" and doc["schema"] == 1
    assert doc["D"] == "40/9"
    assert doc["independent_geodesic_count"] == 1 and doc["has_null_homogeneous"] is False
    assert doc["is_go"] is False and doc["is_go"] == doc["is_naturally_reductive"]
    assert doc["stated"] and doc["discrepancies"] == []


def test_json_round_trip_is_byte_identical():
    from fractions import Fraction

    text = dumps(classify(build_family("g7", alpha=1, beta=Fraction(1, 3), gamma=0, delta=3), samples=30))
    assert dumps(json.loads(text)) == text


def test_scalar_formatting():
    from fractions import Fraction

    assert scalar_text(Fraction(-3, 4)) == "-3/4"
    assert scalar_text(-0.0) == "0"
    assert scalar_text(0.1) == "0.10000000000000001"
    assert scalar_text(None) == "" and scalar_text(True) == "true"
    assert to_jsonable({"a": (Fraction(2), Fraction(1, 2))}) == {"a": [2, "1/2"]}
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_csv_output(capsys):
    code, out, _ = _run(capsys, "classify", *G5, "--samples", "20", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["D"] == "40/9" and rows[0]["epsilon"] == ""
    assert to_csv([]).count("\n") == 1


@pytest.mark.parametrize("argv, needle", [
    (["classify", "--family", "g5", "--alpha", "1", "--beta", "2", "--gamma", "1", "--delta", "2"],
     "alpha*gamma+beta*delta!=0"),
    (["classify", "--family", "g5", "--alpha", "1", "--beta", "2", "--gamma=-4"], "missing field 'delta'"),
    (["classify", "--family", "g9", "--alpha", "1"], "unknown family"),
    (["classify"], "--family"),
    (["classify", *G5, "--tol", "0"], "--tol"),
    (["classify", *G5, "--samples", "0"], "--samples"),
    (["scan", "--family", "g5", "--alpha", "1", "--beta", "0:1:0", "--gamma", "0", "--delta", "1"], "step"),
])
def test_invalid_input_exits_2(capsys, argv, needle):
    code, out, err = _run(capsys, *argv)
    assert code == 2 and out == ""
    assert needle in err


def test_input_file_diagnostics(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"family": "g5",\n "alpha": 1, "beta": "x", "gamma": 0, "delta": 1}\n')
    code, _, err = _run(capsys, "classify", "--input", str(bad))
    assert code == 2 and f"{bad}:2: field 'beta'" in err
    broken = tmp_path / "broken.json"
    broken.write_text('{"family": "g5",\n "alpha": }')
    code, _, err = _run(capsys, "classify", "--input", str(broken))
    assert code == 2 and f"{broken}:2:" in err
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"family": "g4", "alpha": 3, "beta": 4, "epsilon": 1}))
    out_path = tmp_path / "out.json"
    code, _, _ = _run(capsys, "go-check", "--input", str(good), "--samples", "50", "--output", str(out_path))
    assert code == 0 and json.loads(out_path.read_text())["is_go"] is True


def test_geodesics_and_isotropy_commands(capsys):
    code, out, _ = _run(capsys, "geodesics", "--family", "g7", "--alpha", "1", "--beta", "1", "--gamma", "0",
                        "--delta", "2", "--samples", "2000")
    doc = json.loads(out)
    assert code == 0 and doc["has_null"] and doc["independent_count"] == 2
    assert all(v["causal"] == "null" for v in doc["vectors"])
    code, out, _ = _run(capsys, "isotropy", "--family", "g5", "--alpha", "0", "--beta", "0", "--gamma", "1",
                        "--delta", "2")
    doc = json.loads(out)
    assert doc["l_dim"] == 0 and doc["h_dims"] == [1, 1, 1] and doc["stable_index"] is None
    assert doc["stated_stable_index"] == 2


def test_seed_environment_override(capsys, monkeypatch):
    argv = ["geodesics", "--family", "g3", "--alpha", "1", "--beta", "2", "--gamma", "3", "--samples", "500"]
    monkeypatch.setenv("LORGEO_SEED", "7")
    _, a, _ = _run(capsys, *argv, "--seed", "1")
    _, b, _ = _run(capsys, *argv, "--seed", "2")
    assert a == b
    monkeypatch.setenv("LORGEO_SEED", "x")
    assert _run(capsys, *argv)[0] == 2


def test_scan_grid_with_expression_and_reasons(capsys):
    code, out, _ = _run(capsys, "scan", "--family", "g5", "--alpha", "0:1:1", "--beta", "1", "--delta", "1",
                        "--gamma=-beta*delta/alpha", "--samples", "20")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert rows[0]["reason"] == "gamma: division by zero"
    assert rows[1]["gamma"] == "-1" and rows[1]["reason"] == ""


def test_scan_reports_constraint_violations(capsys):
    code, out, _ = _run(capsys, "scan", "--family", "g7", "--alpha=-1:1:1", "--beta", "0", "--gamma", "0",
                        "--delta", "1", "--samples", "20", "--jobs", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["reason"] for r in rows] == ["alpha+delta=0", "", ""]


def test_grid_parsing():
    assert parse_axis("a", "1/2:1:1/4").values[-1] == 1
    assert parse_axis("a", {"range": [0, 1, "1/2"]}).values == (0, 0.5, 1)
    assert parse_axis("a", "beta*2").expression == "beta*2"
    assert evaluate("-(b**2)/a", {"a": 2, "b": 3}) == -4.5
    for bad in ("__import__('os')", "b**0.5", "c+1"):
        with pytest.raises(GridError):
            evaluate(bad, {"a": 1, "b": 1})
    with pytest.raises(GridError):
        list(grid_points("g5", {"alpha": "beta", "beta": "alpha", "gamma": 0, "delta": 1}))
    with pytest.raises(GridError):
        list(grid_points("g5", {"alpha": 1}))


def test_verify_command_is_fast_and_passes():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "lorgeo.cli", "verify", "--samples", "10"], capture_output=True,
                          text=True)
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "all suites passed" in proc.stdout
    assert elapsed < 5.0


def test_verify_negative_control(capsys):
    code, out, _ = _run(capsys, "verify", "--samples", "5", "--inject-fault", "jacobi", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["ok"] is False
    assert [s["suite"] for s in doc["suites"] if not s["ok"] and not s["informational"]] == ["structure"]
