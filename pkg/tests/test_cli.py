import subprocess
import sys

import pytest

from planepart.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exact(capsys):
    assert run(capsys, "exact", "6")[1] == "6\t48\n"
    assert run(capsys, "exact", "0")[1] == "0\t1\n"
    code, out, _ = run(capsys, "exact", "100")
    assert code == 0 and out.strip().split("\t")[1].startswith("592060660300520")
    assert run(capsys, "--format", "records", "exact", "5:6")[1] == "n=5 PL=24\nn=6 PL=48\n"


def test_exact_with_cache_file(capsys, tmp_path):
    path = tmp_path / "pl.txt"
    run(capsys, "--cache", str(path), "exact", "30")
    assert path.read_text().startswith("PLCACHE v1\n0\t1")
    code, out, _ = run(capsys, "exact", "30", "--cache", str(path))
    assert code == 0 and out.startswith("30\t")


def test_bad_cache_file(capsys, tmp_path):
    path = tmp_path / "pl.txt"
    path.write_text("PLCACHE v9\n0\t1")
    code, _, err = run(capsys, "--cache", str(path), "exact", "3")
    assert code == 2 and "line 1" in err


def test_estimate(capsys):
    code, out, _ = run(capsys, "estimate", "500", "--r", "2")
    assert code == 0
    vals = dict(line.split(" = ", 1) for line in out.splitlines())
    lo, hi = float(vals["lower"]), float(vals["upper"])
    assert lo < 2.915e52 < hi


def test_estimate_floor(capsys):
    code, _, err = run(capsys, "estimate", "86", "--r", "2")
    assert code != 0 and "87" in err


def test_estimate_r1_closed_form(capsys):
    code, out, _ = run(capsys, "estimate", "105", "--r", "1", "--ledger", "--check")
    assert code == 0
    assert "527 n^(-5/3)" in out and "X_r" in out and "exact_inside = yes" in out


def test_tables(capsys):
    _, out, _ = run(capsys, "tables", "1")
    rows = {line.split("\t")[0]: line.split("\t")[1:] for line in out.splitlines()[1:]}
    assert rows["200"] == ["4.06e27", "-3.00e-8", "7.70e-2"]
    assert rows["100"][1] == "-1.18e-7" and rows["500"][1] == "-4.87e-9"
    _, out, _ = run(capsys, "tables", "2")
    rows = {line.split("\t")[0]: line.split("\t")[1:] for line in out.splitlines()[1:]}
    assert rows["1000"] == ["3.542e84", "3.542e84", "3.542e84"]
    assert rows["100"] == ["5.932e15", "5.920e16", "1.124e17"]


def test_truncation_helper():
    from planepart.cli import truncated
    assert truncated(0.07795, 3) == "7.79e-2"
    assert truncated(-3.0059e-8, 3) == "-3.00e-8"
    assert truncated(1000, 2) == "1.0e3"


def test_certify_turan(capsys):
    code, out, _ = run(capsys, "certify", "turan", "--d", "2", "--from", "1", "--to", "11")
    assert code == 1 and "status: refuted" in out and "failures: 1 3 5 7 9 11" in out
    code, out, _ = run(capsys, "--format", "records", "certify", "turan", "--d", "3", "--to", "2000")
    assert code == 0 and "status=certified" in out and "threshold=" in out


def test_certify_logconcave(capsys):
    code, out, _ = run(capsys, "certify", "logconcave", "--from", "12", "--summary")
    assert code == 0
    assert "threshold: 8820" in out and "status: certified" in out


def test_jensen_and_hermite(capsys):
    code, out, _ = run(capsys, "jensen", "0", "--d", "3")
    assert "coeffs = 1,3,9,6" in out
    _, out, _ = run(capsys, "hermite", "--d", "3")
    assert out.strip() == "H_3 = 0,-6,0,1"
    code, out, _ = run(capsys, "--format", "records", "hermite", "500", "1000", "--d", "3")
    assert code == 0 and len(out.splitlines()) == 2 and "distance=" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "20")
    assert code == 0
    vals = dict(line.split(" = ", 1) for line in out.splitlines())
    assert float(vals["residual"]) <= 1e-6
    code, _, err = run(capsys, "oracle", "5000")
    assert code == 2 and "200" in err


def test_constants(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == 0 and "C_2 = 2.00069" in out and "D_2 = " in out


def test_bad_precision(capsys):
    with pytest.raises(SystemExit):
        main(["--precision", "8", "exact", "3"])


def test_deterministic_output():
    cmd = [sys.executable, "-m", "planepart", "--format", "records", "estimate", "300"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and a
