import json

import pytest
from click.testing import CliRunner

from seriesolve.cli import main

EXP = """\
[field]
q
[problem]
kind: II
coeffs: constant
r: 1
N: 4
[matrix A]
1
[init]
1
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def exp_file(tmp_path):
    p = tmp_path / "exp.txt"
    p.write_text(EXP)
    return str(p)


def test_solve(runner, exp_file):
    res = runner.invoke(main, ["solve", exp_file])
    assert res.exit_code == 0, res.output
    assert res.output == "1\n1\n1/2\n1/6\n"
    res = runner.invoke(main, ["solve", exp_file, "--N", "2", "--engine", "dac"])
    assert res.output == "1\n1\n"
    res = runner.invoke(main, ["solve", exp_file, "--field", "p:7", "--json"])
    d = json.loads(res.output)
    assert d["field"] == "p:7" and d["series"] == [["1", "1", "4", "6"]] and d["engine"] == "const"


def test_solve_errors(runner, exp_file, tmp_path):
    ser = tmp_path / "ser.txt"
    ser.write_text(EXP.replace("constant", "series").replace("[matrix A]\n1", "[matrix A]\n1 1"))
    res = runner.invoke(main, ["solve", str(ser), "--engine", "const"])
    assert res.exit_code == 1 and "EngineUnsupported" in res.output
    bad = tmp_path / "bad.txt"
    bad.write_text(EXP.replace("kind: II", "kind: X"))
    res = runner.invoke(main, ["solve", str(bad)])
    assert res.exit_code == 1 and "line 4, column 7" in res.output


def test_check(runner, exp_file):
    res = runner.invoke(main, ["check", exp_file, "--engine", "newton"])
    assert res.exit_code == 0
    assert "oracle match" in res.output and "residual ok" in res.output


def test_random_then_solve(runner, tmp_path):
    out = tmp_path / "r.txt"
    res = runner.invoke(main, ["random", "ii", "--coeffs", "polynomial", "--r", "2", "--N", "12",
                               "--seed", "4", "-o", str(out)])
    assert res.exit_code == 0
    res = runner.invoke(main, ["check", str(out)])
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["random", "nonlinear", "--r", "2", "--field", "q"])
    assert "[equation]" in res.output and "dy2 =" in res.output


def test_bench(runner, tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("II,dac,2,32\nnonlinear,const,1,8\n")
    out = tmp_path / "out.csv"
    res = runner.invoke(main, ["bench", "--grid", str(grid), "--reps", "1", "--out", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "engine,problem,r,N,seconds,field_muls,mat_muls"
    assert lines[1].startswith("dac,II,2,32,") and ",error,," in lines[2]


def test_special_commands(runner, exp_file, tmp_path):
    res = runner.invoke(main, ["const-II", exp_file])
    assert res.exit_code == 0 and res.output == "1\n1\n1/2\n1/6\n"
    res = runner.invoke(main, ["const-II", exp_file, "--engine", "naive", "--json"])
    assert json.loads(res.output)["engine"] == "naive"
    res = runner.invoke(main, ["const-ii", exp_file])
    assert res.exit_code != 0 and "kind ii" in res.output
    poly = tmp_path / "p.txt"
    runner.invoke(main, ["random", "II", "--coeffs", "polynomial", "--seed", "1", "-o", str(poly)])
    res = runner.invoke(main, ["poly-II", str(poly)])
    assert res.exit_code == 0 and res.output.count("\n\n") == 1
    for name in ["const-i", "const-I", "poly-ii"]:
        assert runner.invoke(main, [name, "--help"]).exit_code == 0
