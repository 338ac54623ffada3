"""End-to-end tests for the command-line subcommands."""

import sys
import os
import csv
import io
import json
from contextlib import redirect_stdout
from fractions import Fraction

import mpmath

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dyadic_orbits.cli import EXIT_ERROR, EXIT_OK, EXIT_VIOLATION, run_cli  # noqa: E402
from dyadic_orbits.config import config  # noqa: E402
from dyadic_orbits.storage.reports import value_cell  # noqa: E402


def run_captured(argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = run_cli(argv)
    return code, buffer.getvalue()


def read_csv(text: str):
    return list(csv.DictReader(io.StringIO(text)))


def test_generate(tmp_path):
    code, output = run_captured(["generate", "--spec", "rational:1/3", "--digits", "8"])
    assert code == EXIT_OK
    assert output == "01010101\n"
    out = tmp_path / "nested" / "digits.txt"
    code = run_cli(["generate", "--spec", "champernowne", "--digits", "8", "--out", str(out)])
    assert code == EXIT_OK
    assert out.read_text() == "11011100\n"
    print("  PASS: generate to stdout and to a file")


def test_analyze_csv():
    code, output = run_captured(["analyze", "--spec", "rational:1/3", "--p", "2", "--n-max", "2",
                                 "--schedule", "log"])
    assert code == EXIT_OK
    assert output.splitlines()[0].startswith("n,region,j,q,S_lo,S_hi")
    rows = read_csv(output)
    assert [row["n"] for row in rows] == ["1", "2"]
    assert (rows[0]["region"], rows[0]["j"], rows[0]["q"]) == ("J", "1", "1")
    assert rows[1]["region"] == "K"
    assert Fraction(rows[0]["S_lo"]) <= 9 <= Fraction(rows[0]["S_hi"])
    assert Fraction(rows[1]["S_lo"]) <= Fraction(45, 4) <= Fraction(rows[1]["S_hi"])
    assert Fraction(rows[1]["A_lo"]) <= Fraction(45, 8) <= Fraction(rows[1]["A_hi"])
    assert rows[1]["phi"] == "1"
    assert rows[1]["lambda"] == "4"
    assert rows[1]["log2_lambda"] == "2"
    print("  PASS: analyze CSV for 1/3, p=2")


def test_analyze_json_and_dual():
    code, output = run_captured(["analyze", "--spec", "champernowne", "--p", "2", "--n-max", "7",
                                 "--schedule", "log", "--format", "json"])
    assert code == EXIT_OK
    payload = json.loads(output)
    assert payload["epsilon"] == "2^-40"
    last = payload["rows"][-1]
    assert last["n"] == "7"
    assert last["lambda"] == "6.66666666666666667"
    assert last["upsilon"] == "1.5"
    print("  PASS: analyze JSON for Champernowne")

    code, output = run_captured(["analyze", "--spec", "rational:1/5", "--p", "2", "--n-max", "4",
                                 "--schedule", "log", "--dual", "--epsilon", "2^-50"])
    assert code == EXIT_OK
    rows = read_csv(output)
    assert list(rows[0].keys()) == ["n", "S_lo", "S_hi", "A_lo", "A_hi"]
    assert Fraction(rows[-1]["S_lo"]) <= Fraction(6, 5) <= Fraction(rows[-1]["S_hi"])
    print("  PASS: dual CSV for 1/5")


def test_analyze_at_acceptance_scale():
    code, output = run_captured(["analyze", "--spec", "rational:1/3", "--p", "2", "--n-max", "1000"])
    assert code == EXIT_OK
    rows = read_csv(output)
    assert rows[-1]["n"] == "1000"
    assert all(row["S_lo"] and row["S_hi"] for row in rows)
    print(f"  PASS: analyze runs to n=1000 on the {mpmath.libmp.BACKEND} backend")


def test_estimator_cells_round_to_eighteen_digits():
    assert value_cell(Fraction(20, 3)) == "6.66666666666666667"
    assert value_cell(Fraction(45, 8)) == "5.625"
    assert value_cell(Fraction(10**18)) == ""
    print("  PASS: estimator cells keep 18 significant digits")


def test_verify_exit_codes():
    code, output = run_captured(["verify", "--spec", "rational:1/3", "--p", "2", "--n-max", "200"])
    assert code == EXIT_OK
    report = json.loads(output)
    assert report["pass"] is True
    assert all(check["pass"] for check in report["checks"])
    print("  PASS: verify passes on 1/3")

    code, output = run_captured(["verify", "--spec", "blocks:cycle=[(1,1)]", "--p", "2", "--n-max", "100",
                                 "--bound", "5"])
    assert code == EXIT_VIOLATION
    report = json.loads(output)
    assert report["checks"][-1]["check"] == "theorem6_boundedness"
    assert report["checks"][-1]["pass"] is False
    print("  PASS: a violated bound exits 1")


def test_errors():
    assert run_cli(["analyze", "--spec", "rational:1/3"]) == EXIT_ERROR
    assert run_cli(["frobnicate"]) == EXIT_ERROR
    print("  PASS: usage errors exit 2")

    code, output = run_captured(["generate", "--spec", "rational:1/", "--digits", "4", "--error-json"])
    assert code == EXIT_ERROR
    error = json.loads(output)
    assert error["error"] == "SyntaxError"
    assert error["position"] == 11
    print("  PASS: syntax error as JSON")

    code, output = run_captured(["generate", "--spec", "rational:3/8", "--digits", "4", "--error-json"])
    assert code == EXIT_ERROR
    assert json.loads(output)["error"] == "InvalidSpec"

    code, output = run_captured(["analyze", "--spec", "rational:1/3", "--p", "1.5", "--n-max", "4",
                                 "--error-json"])
    assert code == EXIT_ERROR
    assert json.loads(output)["error"] == "InvalidArgument"

    code, output = run_captured(["generate", "--spec", "rational:1/3", "--digits", "4"])
    assert code == EXIT_OK
    print("  PASS: invalid specs and exponents exit 2")


def test_normality(tmp_path):
    out = tmp_path / "normality.json"
    code = run_cli(["normality", "--spec", "blocks:cycle=[(1,1)]", "--n-max", "100", "--j-max", "5",
                    "--out", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["digit_frequencies"] == {"0": "1/2", "1": "1/2"}
    assert report["pattern_counts"] == {"00": 0, "01": 50, "10": 50, "11": 0}
    assert [entry["j"] for entry in report["diagnostics"]] == [2, 3, 4, 5]
    assert report["diagnostics"][-1]["ratio_l"] == "1/4"
    print("  PASS: normality report")


def test_sweep(tmp_path):
    workers = config.MAX_WORKERS
    try:
        out = tmp_path / "sweep.json"
        code = run_cli(["sweep", "--spec", "rational:1/3", "--spec", "champernowne", "--p-list", "1,2",
                        "--n-max", "100", "--jobs", "1", "--out", str(out)])
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report["pass"] is True
        assert [(run["spec"], run["p"]) for run in report["runs"]] == [
            ("rational:1/3", "1"), ("rational:1/3", "2"), ("champernowne", "1"), ("champernowne", "2"),
        ]
    finally:
        config.MAX_WORKERS = workers
    print("  PASS: sweep over two specs and two exponents")


def main():
    """Run all tests."""
    import tempfile
    from pathlib import Path

    print("=" * 60)
    print("CLI Test Harness")
    print("=" * 60)

    with tempfile.TemporaryDirectory() as tmp:
        test_generate(Path(tmp))
    test_analyze_csv()
    test_analyze_json_and_dual()
    test_analyze_at_acceptance_scale()
    test_estimator_cells_round_to_eighteen_digits()
    test_verify_exit_codes()
    test_errors()
    with tempfile.TemporaryDirectory() as tmp:
        test_normality(Path(tmp))
    with tempfile.TemporaryDirectory() as tmp:
        test_sweep(Path(tmp))

    print("\nAll tests passed!")


if __name__ == "__main__":
    main()
