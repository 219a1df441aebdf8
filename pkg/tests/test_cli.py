import csv
import json
import subprocess
import sys

import pytest

from qreals.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_qrat(capsys):
    code, out, _ = run(capsys, "qrat", "5/2")
    assert code == 0 and out.strip() == "(1+2q+q^2+q^3)/(1+q)"
    assert run(capsys, "qrat", "--", "-1/2")[1].strip() == "-1/(q+q^2)"


def test_qrat_json(capsys):
    code, out, _ = run(capsys, "qrat", "8/5", "--json")
    data = json.loads(out)
    assert code == 0
    assert (data["r"], data["s"]) == (8, 5)
    assert data["num"] == [1, 2, 2, 2, 1] and data["den"] == [1, 2, 1, 1]


def test_series(capsys):
    code, out, _ = run(capsys, "series", "--cf", "[2;(2)]", "--order", "5")
    assert code == 0 and out.strip() == "1+q+q^4"


def test_series_bfile(capsys, tmp_path):
    path = tmp_path / "b.txt"
    run(capsys, "series", "--cf", "[1;(1)]", "--order", "21", "--bfile", str(path))
    lines = path.read_text().split("\n")
    assert lines[0] == "0 1"
    assert lines[20] == "20 1032004"
    assert lines[19] == "19 -424748"


def test_cf_conversion(capsys):
    assert run(capsys, "cf", "--to", "hj", "5/2")[1].strip() == "[[3,2]]"
    assert run(capsys, "cf", "--to", "hj", "[2;(2)]")[1].strip() == "[[3;(2,4)]]"


def test_family(capsys, tmp_path):
    assert run(capsys, "family", "fib", "--n", "8")[1].strip() == "1+3q+4q^2+5q^3+4q^4+3q^5+q^6"
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "family", "pell", "--triangle", "3", "--csv", str(path))
    assert code == 0 and out.split("\n")[:3] == ["1", "1 1", "1 1 2 1"]
    assert path.exists()


def test_roots_outputs(capsys, tmp_path):
    csv_path, png = tmp_path / "r.csv", tmp_path / "r.png"
    code, out, _ = run(capsys, "roots", "--family", "pell", "--n", "10", "--csv", str(csv_path), "--plot", str(png))
    assert code == 0
    assert "min_modulus 0.566" in out
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 17
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_roots_of_polynomial(capsys):
    code, out, _ = run(capsys, "roots", "--poly", "1+3q+q^2", "--json")
    data = json.loads(out)
    assert code == 0 and abs(data["min_modulus"] - 0.3819660113) < 1e-9


def test_annulus(capsys, tmp_path):
    png = tmp_path / "a.png"
    code, out, _ = run(capsys, "annulus", "--family", "fib", "--max", "12", "--plot", str(png))
    assert code == 0 and png.exists()
    rows = out.strip().split("\n")
    assert rows[0].startswith("label,n,degree")
    assert all(r.endswith("True") for r in rows[1:-1])
    assert rows[-1].startswith("all_pass True")


def test_radius(capsys, tmp_path):
    code, out, _ = run(capsys, "radius", "--cf", "[1;(1)]", "--exact")
    lines = out.split("\n")
    assert code == 0
    assert lines[0] == "0.3819660113"
    assert "certificate q^2+3q+1" in out
    png = tmp_path / "c.png"
    code, out, _ = run(capsys, "radius", "--cf", "[2;(2)]", "--crosscheck", "--plot", str(png), "--digits", "6")
    assert out.split("\n")[0] == "0.531010" and png.exists()


def test_radius_json(capsys):
    data = json.loads(run(capsys, "radius", "--cf", "[1;(1)]", "--json")[1])
    assert data["method"] == "ExactDiscriminant"
    assert abs(data["value"] - 0.381966011250105) < 1e-15


def test_genthm(capsys):
    code, out, _ = run(capsys, "genthm", "--cf", "[[2;(4)]]", "--n", "20")
    assert code == 0 and "guaranteed True" in out and "empirical_pass True" in out


def test_scan(capsys, tmp_path):
    path = tmp_path / "scan.json"
    code, out, _ = run(capsys, "scan", "--samples", "8", "--out", str(path), "--plot", str(tmp_path / "h.png"))
    assert code == 0 and "violations 0" in out
    assert json.loads(path.read_text())["samples"] == 8


def test_bad_arguments_exit_2(capsys):
    for argv in (["qrat", "1/0"], ["radius", "--cf", "garbage"], ["series", "--cf", "[1;(1)]", "--order", "0"],
                 ["family", "lucas", "--n", "3"], ["nonsense"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    assert "error" in capsys.readouterr().err


def test_runtime_errors_exit_1(capsys, tmp_path):
    missing = tmp_path / "no" / "such" / "dir" / "x.csv"
    code, _, err = run(capsys, "roots", "--poly", "1+q", "--csv", str(missing))
    assert code == 1 and err.startswith("error:")
    code, _, err = run(capsys, "roots", "--poly", "0")
    assert code == 1 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qreals", "qrat", "5/3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    assert out.rstrip().endswith("0 failed")
    assert not any(line.startswith("FAIL") for line in out.split("\n"))
