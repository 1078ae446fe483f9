import csv
import io
import json
import subprocess
import sys

import pytest

from quadzeta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_char_even(capsys):
    code, out, _ = run(capsys, "char", "-d", "5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    rows = {r["quantity"]: r for r in data["rows"]}
    assert rows["parity"]["value"] == "even"
    assert rows["chi(1..10)"]["value"].startswith("1,-1,-1,1,0")
    assert rows["gauss_sum.re"]["value"].startswith("2.2360679774997896964")
    assert all("error_bound" in r for r in data["rows"])


def test_char_odd(capsys):
    code, out, _ = run(capsys, "char", "-d", "-4", "--format", "json")
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    assert code == 0
    assert rows["parity"]["value"] == "odd"
    assert float(rows["gauss_sum.im"]["value"]) == 2.0
    assert abs(float(rows["gauss_sum.re"]["value"])) < 1e-40


def test_char_not_fundamental(capsys):
    code, out, err = run(capsys, "char", "-d", "9")
    assert code == 2
    assert "not a fundamental discriminant" in err
    assert out == ""


def test_exact(capsys):
    code, out, _ = run(capsys, "exact", "-d", "5", "-n", "2", "--format", "json")
    assert code == 0
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    assert rows["B_2,chi"]["exact"] == "4/5"
    assert rows["q2(2)"]["exact"] == "1/5*sqrt(5)"
    assert rows["q1(2)"]["exact"] == "13/30*sqrt(5)"
    assert rows["q1(2)"]["decimal"].startswith("0.968962790249908868")


def test_exact_without_sign_fix(capsys):
    code, out, _ = run(capsys, "exact", "-d", "5", "-n", "2", "--no-sign-fix", "--format", "json")
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    assert rows["q1(2)"]["exact"] == "-13/30*sqrt(5)"


@pytest.mark.parametrize("argv", [["exact", "-d", "5", "-n", "3"], ["exact", "-d", "-4", "-n", "2"], ["exact", "-d", "5"]])
def test_exact_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_eval_p1(capsys):
    code, out, _ = run(capsys, "eval", "-d", "5", "--fn", "p1", "-s", "2", "-N", "12", "-D", "50", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["value"].startswith("1.01592962725556203853")
    assert float(row["error_bound"]) < 1e-45
    assert len(row["paths"].split()) == 12


def test_eval_q2_text(capsys):
    code, out, _ = run(capsys, "eval", "-d", "5", "--fn", "q2", "-s", "2")
    assert code == 0
    assert "0.4472135954" in out
    assert "error_bound" in out


def test_eval_zeta_k(capsys):
    code, out, _ = run(capsys, "eval", "-d", "5", "--fn", "zetaK", "-s", "2", "-D", "30", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    # zeta(2) L(2, chi_5) = 4 sqrt(5) pi^4 / 750
    assert abs(float(rows[0]["value"]) - 1.1616711956186385) < 1e-15


def test_eval_domain(capsys):
    code, _, err = run(capsys, "eval", "-d", "5", "--fn", "p1", "-s", "1")
    assert code == 2
    assert "sigma" in err


def test_table_row_one(capsys):
    code, out, _ = run(capsys, "table", "-d", "5", "-s", "2", "-N", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,error_exponent,error_decimal,tail_bound_exponent"
    assert lines[1].startswith("1,")


def test_table_p2_csv(capsys):
    code, out, _ = run(capsys, "table", "-d", "5", "--fn", "p2", "-s", "2", "-N", "10", "-D", "700", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["error_exponent"]) for r in rows] == [-2, -3, -6, -11, -21, -41, -79, -157, -311, -620]
    for r in rows:
        assert float(r["error_decimal"]) > 0 or "e-" in r["error_decimal"]


def test_table_raises_digits(capsys):
    code, out, err = run(capsys, "table", "-d", "8", "-s", "2", "-N", "8", "--format", "json")
    assert code == 0
    assert "raising digits" in err
    data = json.loads(out)
    assert int(data["config"]["digits"]) > 50
    exps = [int(r["error_exponent"]) for r in data["rows"]]
    assert all(b < a for a, b in zip(exps, exps[1:]))
    # roughly doubling once the series is in its asymptotic regime
    for a, b in zip(exps[3:], exps[4:]):
        assert 1.7 < b / a < 2.3


def test_table_bad_fn(capsys):
    code, _, _ = run(capsys, "table", "-d", "5", "--fn", "q1", "-N", "2")
    assert code == 2


def test_table_output_is_reproducible(capsys):
    argv = ["table", "-d", "13", "-s", "2", "-N", "6", "--format", "csv"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "-d", "5", "--format", "json")
    assert code == 0
    checks = json.loads(out)["checks"]
    assert len(checks) > 30
    assert all(c["status"] == "PASS" for c in checks)
    assert all({"value", "bound", "margin"} <= set(c) for c in checks)


def test_verify_without_sign_fix_fails(capsys):
    code, out, _ = run(capsys, "verify", "-d", "5", "--no-sign-fix", "-s", "2", "--format", "json")
    assert code == 1
    failed = [c["check"] for c in json.loads(out)["checks"] if c["status"] == "FAIL"]
    assert failed and all(name.startswith("q1(") and "exact vs analytic" in name for name in failed)


def test_verify_odd_character_and_sigma_grid(capsys):
    code, out, _ = run(capsys, "verify", "-d", "-8", "-s", "2", "-s", "1.5")
    assert code == 0
    assert "s=1.5" in out and "checks passed" in out


@pytest.mark.parametrize("argv", [["verify", "-d", "9"], ["verify", "-d", "5", "-s", "1"], ["eval", "-d", "5", "-D", "0"]])
def test_verify_bad_input(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "quadzeta", "eval"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_precision_exit_code(capsys, monkeypatch):
    from quadzeta import cli
    from quadzeta.errors import PrecisionInsufficient

    def boom(*a, **k):
        raise PrecisionInsufficient("not enough digits")

    monkeypatch.setattr(cli, "error_table", boom)
    code, _, err = run(capsys, "table", "-d", "5", "-N", "2")
    assert code == 3
    assert "not enough digits" in err


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "quadzeta", "char", "-d", "13", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "quantity,value,error_bound"
