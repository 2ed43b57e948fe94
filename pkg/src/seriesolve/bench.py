"""Timing harness: median wall time and operation counts per grid point."""

from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .counter import counting
from .field import FieldDescriptor, PrimeField, parse_field
from .frontend import dispatch
from .problem import random_problem

CSV_HEADER = ("engine", "problem", "r", "N", "seconds", "field_muls", "mat_muls")
DEFAULT_FIELD = PrimeField(2013265921)


@dataclass
class BenchRecord:
    engine: str
    problem: str
    r: int
    N: int
    seconds: float | None
    field_muls: int | None = None
    mat_muls: int | None = None
    error: str | None = None

    def __post_init__(self):
        if self.r < 1 or self.N < 1:
            raise ValueError("r and N must be positive")
        if self.seconds is not None and self.seconds < 0:
            raise ValueError("seconds must be non-negative")

    def row(self) -> list:
        if self.error is not None:
            return [self.engine, self.problem, self.r, self.N, "error", "", self.error]
        return [self.engine, self.problem, self.r, self.N, f"{self.seconds:.6f}",
                self.field_muls, self.mat_muls]


@dataclass(frozen=True)
class GridPoint:
    problem: str
    engine: str
    r: int
    N: int
    coeffs: str | None = None  # default follows the engine

    def coeff_class(self) -> str:
        if self.coeffs:
            return self.coeffs
        return {"const": "constant", "polycoeff": "polynomial"}.get(self.engine, "series")


def parse_grid(text: str) -> list[GridPoint]:
    """Lines ``problem,engine,r,N[,coeffs]``; '#' starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[:4] == ["problem", "engine", "r", "N"]:
            continue
        if len(parts) not in (4, 5):
            raise ValueError(f"grid line {lineno}: expected problem,engine,r,N[,coeffs]")
        try:
            r, N = int(parts[2]), int(parts[3])
        except ValueError:
            raise ValueError(f"grid line {lineno}: r and N must be integers") from None
        out.append(GridPoint(parts[0], parts[1], r, N, parts[4] if len(parts) == 5 else None))
    return out


def run_point(point: GridPoint, reps: int = 3, field: FieldDescriptor = DEFAULT_FIELD,
              seed: int = 0) -> BenchRecord:
    """Median of ``reps`` timed solves of one seeded random instance."""
    try:
        spec = random_problem(point.problem, point.coeff_class(), point.r, point.N, field, seed)
        times = []
        for _ in range(max(reps, 1)):
            with counting() as c:
                t0 = time.perf_counter()
                dispatch(spec, point.engine)
                times.append(time.perf_counter() - t0)
        return BenchRecord(point.engine, point.problem, point.r, point.N,
                           statistics.median(times), c.field_muls, c.total_mat_muls)
    except Exception as e:  # recorded as an error row, the grid goes on
        return BenchRecord(point.engine, point.problem, point.r, point.N, None,
                           error=f"{type(e).__name__}: {e}")


def _run_packed(args):
    point, reps, field_spec, seed = args
    return run_point(point, reps, parse_field(field_spec), seed)


def bench(grid, reps: int = 3, field: FieldDescriptor = DEFAULT_FIELD, seed: int = 0,
          jobs: int = 1) -> list[BenchRecord]:
    """Run every grid point; ``jobs > 1`` spreads points over processes."""
    grid = list(grid)
    if jobs <= 1 or len(grid) <= 1:
        return [run_point(p, reps, field, seed) for p in grid]
    with ProcessPoolExecutor(jobs) as pool:
        return list(pool.map(_run_packed, [(p, reps, field.spec(), seed) for p in grid]))


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.row())
    return buf.getvalue()
