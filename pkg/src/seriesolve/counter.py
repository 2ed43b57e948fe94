"""Operation counters for complexity measurements.

Counting is opt-in and scoped to a ``with counting() as c:`` block, so two
solves running in different threads or tasks never share a counter.
"""

from __future__ import annotations

import contextvars
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field

_current: contextvars.ContextVar[OpCounter | None] = contextvars.ContextVar(
    "seriesolve_opcounter", default=None
)


@dataclass
class OpCounter:
    field_muls: int = 0
    poly_muls: Counter = field(default_factory=Counter)  # size -> count
    mat_muls: Counter = field(default_factory=Counter)  # (r, size) -> count
    int_divisors: list = field(default_factory=list)
    unit_inversions: int = 0

    @property
    def total_mat_muls(self) -> int:
        return sum(self.mat_muls.values())

    @property
    def total_poly_muls(self) -> int:
        return sum(self.poly_muls.values())

    def snapshot(self) -> dict:
        return {
            "field_muls": self.field_muls,
            "poly_muls": self.total_poly_muls,
            "mat_muls": self.total_mat_muls,
            "divisions": len(self.int_divisors) + self.unit_inversions,
        }


@contextmanager
def counting():
    """Collect operation counts for everything run inside the block."""
    c = OpCounter()
    token = _current.set(c)
    try:
        yield c
    finally:
        _current.reset(token)


def active() -> OpCounter | None:
    return _current.get()


def add_field_muls(k: int) -> None:
    c = _current.get()
    if c is not None:
        c.field_muls += int(k)


def record_poly_mul(size: int, k: int = 1) -> None:
    c = _current.get()
    if c is not None:
        c.poly_muls[int(size)] += k


def record_mat_mul(r: int, size: int) -> None:
    c = _current.get()
    if c is not None:
        c.mat_muls[(int(r), int(size))] += 1


def record_int_divisors(divisors) -> None:
    c = _current.get()
    if c is not None:
        c.int_divisors.extend(int(d) for d in divisors)


def record_unit_inversion(k: int = 1) -> None:
    c = _current.get()
    if c is not None:
        c.unit_inversions += k
