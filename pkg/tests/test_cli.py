from __future__ import annotations

import csv
import io
import subprocess
import sys

import pytest

from gfweno.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, main


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_list_commands(capsys):
    assert main(["list-cases"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "swe-lake-at-rest" in out and len(out.strip().splitlines()) == 17
    assert main(["list-schemes"]) == EXIT_OK
    out = capsys.readouterr().out.split()
    assert "weno7gf-ab8" in out and "weno3-nwb" in out


def test_solve_writes_csv(capsys):
    assert main(["solve", "--case", "burgers-smooth-steady", "--scheme", "weno3gf-am4", "--n", "20"]) == EXIT_OK
    cap = capsys.readouterr()
    rows = _rows(cap.out)
    assert rows[0] == ["x", "u_0", "reference_0"]
    assert len(rows) == 22
    assert "L1=" in cap.err


def test_solve_to_file_is_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        rc = main(
            ["solve", "--case", "swe-lake-perturbation-small", "--scheme", "weno5gf-am6", "--n", "25",
             "--t-end", "0.2", "--out", str(p)]
        )
        assert rc == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_converge_and_perturb(capsys):
    rc = main(["converge", "--case", "burgers-smooth-steady", "--scheme", "weno3gf-am6", "--n-list", "20,40"])
    assert rc == EXIT_OK
    cap = capsys.readouterr()
    rows = _rows(cap.out)
    assert rows[0][0] == "n" and [r[0] for r in rows[1:]] == ["20", "40"]
    assert "order=-" in cap.err
    rc = main(
        ["perturb", "--case", "swe-lake-perturbation-small", "--scheme", "weno3gf-am4", "--n", "25",
         "--t-end", "0.1", "--amplitude", "1e-3", "--no-reference"]
    )
    assert rc == EXIT_OK
    assert _rows(capsys.readouterr().out)[0] == ["x", "deviation_0", "deviation_1"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve", "--case", "burgers-mms"],
        ["solve", "--case", "nope", "--scheme", "weno5gf-am6", "--n", "20"],
        ["solve", "--case", "burgers-mms", "--scheme", "weno4gf-am6", "--n", "20"],
        ["solve", "--case", "burgers-mms", "--scheme", "weno5gf-am6", "--n", "x"],
        ["converge", "--case", "burgers-mms", "--scheme", "weno5gf-am6", "--n-list", "20,a"],
        ["perturb", "--case", "burgers-mms", "--scheme", "weno5gf-am6"],
        ["solve", "--case", "burgers-mms", "--scheme", "weno5gf-am6", "--n", "60", "--steady", "--t-end", "1"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_solver_error_exit_code(capsys):
    # explicit extrapolation of an under-resolved oscillatory source blows up
    rc = main(["solve", "--case", "burgers-oscillatory", "--scheme", "weno3gf-ab4", "--n", "100"])
    assert rc == EXIT_SOLVER
    assert "solver error" in capsys.readouterr().err


def test_bad_cfl_is_a_usage_error(capsys):
    rc = main(["solve", "--case", "burgers-mms", "--scheme", "weno5gf-ab6", "--n", "60", "--cfl", "2"])
    assert rc == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gfweno.cli", "list-schemes"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert len(proc.stdout.split()) == 21
