import csv
import io

import pytest

from seriesolve.bench import CSV_HEADER, BenchRecord, GridPoint, bench, parse_grid, run_point, to_csv
from seriesolve.field import PrimeField


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_empty_grid_header_only():
    assert to_csv(bench([])) == ",".join(CSV_HEADER) + "\n"


def test_parse_grid():
    text = """\
problem,engine,r,N
# comment
II,dac,2,64
i,newton,3,32,polynomial  # trailing
"""
    assert parse_grid(text) == [GridPoint("II", "dac", 2, 64), GridPoint("i", "newton", 3, 32, "polynomial")]
    assert GridPoint("II", "const", 2, 8).coeff_class() == "constant"
    assert GridPoint("ii", "polycoeff", 2, 8).coeff_class() == "polynomial"
    assert GridPoint("ii", "dac", 2, 8).coeff_class() == "series"
    for bad in ["II,dac,2", "II,dac,two,8", "a,b,c,d,e,f"]:
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_error_rows():
    recs = bench([GridPoint("nonlinear", "dac", 2, 16), GridPoint("II", "dac", 2, 16)], reps=1)
    rows = _rows(to_csv(recs))
    assert rows[1][:5] == ["dac", "nonlinear", "2", "16", "error"]
    assert rows[1][5] == "" and rows[1][6].startswith("EngineUnsupported")
    assert rows[2][4] != "error" and float(rows[2][4]) >= 0


def test_counters_deterministic():
    grid = [GridPoint("II", "dac", 2, 64), GridPoint("I", "newton", 2, 64), GridPoint("II", "const", 3, 100)]
    a = bench(grid, reps=2, seed=3)
    b = bench(grid, reps=1, seed=3)
    assert [(r.field_muls, r.mat_muls) for r in a] == [(r.field_muls, r.mat_muls) for r in b]
    assert all(r.field_muls > 0 for r in a)
    assert a[1].mat_muls == 5 * 5  # five per doubling, 2 -> 64


def test_parallel_matches_serial():
    grid = [GridPoint("II", "dac", 2, 32), GridPoint("ii", "polycoeff", 2, 32)]
    ser = bench(grid, reps=1, field=PrimeField(101))
    par = bench(grid, reps=1, field=PrimeField(101), jobs=2)
    assert [(r.engine, r.field_muls, r.mat_muls) for r in ser] == [(r.engine, r.field_muls, r.mat_muls) for r in par]


def test_record_validation():
    with pytest.raises(ValueError):
        BenchRecord("dac", "II", 0, 8, 1.0)
    with pytest.raises(ValueError):
        BenchRecord("dac", "II", 1, 8, -1.0)
    assert BenchRecord("dac", "II", 1, 8, 0.5, 10, 2).row() == ["dac", "II", 1, 8, "0.500000", 10, 2]


def test_run_point_bad_kind():
    rec = run_point(GridPoint("III", "dac", 2, 8), reps=1)
    assert rec.error and rec.seconds is None
