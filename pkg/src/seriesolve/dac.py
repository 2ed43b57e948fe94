"""One solution of ``y' = A y + b`` by divide and conquer.

The recursion solves the shifted equation

    t y' + (p I - t A) y = s  mod t^m

by splitting ``y = y0 + t^d y1``: the low half solves the same equation at
order ``d``, the high half an equation with shift ``p + d`` whose right-hand
side is the middle part of the residual left by ``y0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import counter, poly
from .errors import CharacteristicTooSmall, DimensionMismatch, InconsistentBaseCase, NotOrdinaryPoint
from .field import ensure_characteristic
from .matrix import SeriesMatrix, SeriesVector
from .series import Series, series_inverse


@dataclass
class ShiftedEquation:
    """``t y' + (p I - t A) y = s mod t^m`` with ``y(0) = v`` when ``p = 0``."""

    A: SeriesMatrix
    s: SeriesVector
    p: int
    m: int
    v: np.ndarray

    def residual(self, y: SeriesVector) -> SeriesVector:
        """``t y' + (p I - t A) y - s mod t^m``."""
        F = self.A.field
        r, m = self.A.rows, self.m
        Y = poly.pad(F, y.coeffs, m)
        lhs = F.zeros((r, m))
        lhs[:, 1:] = F.reduce(Y[:, 1:] * F.array(np.arange(1, m)))
        lhs = F.add(lhs, F.reduce(Y * F.scalar(self.p)))
        AY = poly.mul_naive(F, self.A.data[:, :, :m], Y[None, :, :], m).sum(axis=1)
        lhs[:, 1:] = F.sub(lhs[:, 1:], F.reduce(AY[:, :m - 1]))
        return SeriesVector(F, F.sub(lhs, poly.pad(F, self.s.coeffs, m)), True)


def general_apply(F, A: np.ndarray, algorithm=None) -> Callable:
    """``(y, n) -> A y mod t^n`` for a dense (r, r, k) coefficient array."""
    r = A.shape[0]

    def apply(y, n):
        counter.record_poly_mul(n, r * r)
        return poly.matmul(F, A[:, :, :n], y[:, None, :], n, algorithm)[:, 0, :]

    return apply


def companion_apply(F, last_row: np.ndarray, algorithm=None) -> Callable:
    """``A y`` for a companion matrix: shifted rows plus one dense last row.

    ``last_row`` is (r, k): the series ``-a_j / a_r``.  Costs r products
    instead of r**2.
    """
    r = last_row.shape[0]

    def apply(y, n):
        out = F.zeros((r, n))
        out[:r - 1, :] = poly.pad(F, y[1:, :], n)
        counter.record_poly_mul(n, r)
        prods = poly.mul(F, last_row[:, :n], y, n, algorithm)
        out[r - 1] = F.reduce(prods.sum(axis=0))
        return out

    return apply


def _leaf(F, apply, s, p, m, v):
    # term-by-term: (p + k) y_k = s_k + (A y)_{k-1}
    r = s.shape[0]
    y = F.zeros((r, m))
    for k in range(m):
        if k == 0 and p == 0:
            if np.any(s[:, 0] != 0):
                raise InconsistentBaseCase("s(0) must vanish when p = 0")
            y[:, 0] = v
            continue
        rhs = s[:, k]
        if k:
            rhs = F.add(rhs, apply(y[:, :k], k)[:, k - 1])
        y[:, k] = F.reduce(rhs * _inv_shift(F, p + k))
    return y


def _inv_shift(F, q: int):
    if F.characteristic() and q % F.characteristic() == 0:
        raise CharacteristicTooSmall(f"shift {q} vanishes in {F!r}")
    counter.record_int_divisors([q])
    return F.inv(q)


def _dac(F, apply, s, p, m, v, leaf):
    if m == 1:
        if p == 0:
            if np.any(s[:, 0] != 0):
                raise InconsistentBaseCase("s(0) must vanish when p = 0")
            return v[:, None].copy()
        return F.reduce(s[:, :1] * _inv_shift(F, p))
    if m <= leaf:
        return _leaf(F, apply, s, p, m, v)
    d = m // 2
    y0 = _dac(F, apply, s[:, :d], p, d, v, leaf)
    # R = mid(s - t y0' - (p I - t A) y0, d, m)
    r = s.shape[0]
    e = s[:, :m].copy()
    ty0 = F.reduce(y0 * F.array(np.arange(d)))  # t * y0' has coefficients k * y0_k
    e[:, :d] = F.sub(e[:, :d], F.add(ty0, F.reduce(y0 * F.scalar(p))))
    Ay0 = apply(y0, m - 1)
    e[:, 1:] = F.add(e[:, 1:], Ay0)
    R = e[:, d:m]
    y1 = _dac(F, apply, R, p + d, m - d, v, leaf)
    out = F.zeros((r, m))
    out[:, :d] = y0
    out[:, d:] = y1
    return out


def divide_and_conquer(A: SeriesMatrix, s: SeriesVector, p: int, m: int, v,
                       leaf: int = 1, algorithm: str | None = None,
                       apply: Callable | None = None) -> SeriesVector:
    """Solve ``t y' + (p I - t A) y = s mod t^m``; ``y(0) = v`` when ``p = 0``.

    ``leaf > 1`` switches to a term-by-term update for ``m <= leaf``; the
    output does not change.
    """
    F = A.field
    r = A.rows
    if s.rows != r:
        raise DimensionMismatch(f"s has {s.rows} rows, A is {r}x{r}")
    v = F.array(v).reshape(r)
    if apply is None:
        apply = general_apply(F, A.data, algorithm)
    sc = poly.pad(F, s.coeffs, m).copy()
    return SeriesVector(F, _dac(F, apply, sc, p, m, v, leaf), True)


def solve(A: SeriesMatrix, b: SeriesVector, N: int, v, leaf: int = 1,
          algorithm: str | None = None, apply: Callable | None = None) -> SeriesVector:
    """``y`` with ``y' = A y + b mod t^{N-1}`` and ``y(0) = v``, precision ``N``.

    Runs the shifted-equation recursion with ``p = 0`` and ``s = t b``.
    """
    F = A.field
    ensure_characteristic(F, N)
    r = A.rows
    s = F.zeros((r, N))
    if N > 1:
        s[:, 1:] = poly.pad(F, b.coeffs, N - 1)
    return divide_and_conquer(A, SeriesVector(F, s, True), 0, N, v, leaf, algorithm, apply)


def _coeff_list(F, a, N):
    return [poly.pad(F, (x.coeffs if isinstance(x, Series) else F.array(x)), N) for x in a]


def companion_data(F, a, N: int, rhs=None):
    """Last companion row ``-a_j / a_r`` (j < r) and the forcing ``rhs / a_r``.

    ``a`` holds ``a_0 .. a_r`` as Series or coefficient lists.
    """
    coeffs = _coeff_list(F, a, N)
    r = len(coeffs) - 1
    if r < 1:
        raise ValueError("equation order must be at least 1")
    if F.is_zero(coeffs[r][0]):
        raise NotOrdinaryPoint("a_r(0) = 0: t = 0 is not an ordinary point")
    inv = series_inverse(Series(F, coeffs[r], True), N).coeffs
    last = F.neg(poly.mul(F, np.array(coeffs[:r]), inv, N))
    forcing = F.zeros(N)
    if rhs is not None:
        rc = poly.pad(F, rhs.coeffs if isinstance(rhs, Series) else F.array(rhs), N)
        forcing = poly.mul(F, rc, inv, N)
    return last, forcing


def companion_matrix(F, a, N: int, rhs=None):
    """Dense companion system ``(A, b)`` of ``sum a_j y^(j) = rhs`` at precision N."""
    last, forcing = companion_data(F, a, N, rhs)
    r = last.shape[0]
    A = F.zeros((r, r, N))
    for i in range(r - 1):
        A[i, i + 1, 0] = F.scalar(1)
    A[r - 1] = last
    b = F.zeros((r, N))
    b[r - 1] = forcing
    return SeriesMatrix(F, A, True), SeriesVector(F, b, True)


def solve_companion(a, rhs, N: int, alpha, leaf: int = 1,
                    algorithm: str | None = None, field=None) -> Series:
    """First ``N`` coefficients of the solution of ``sum_j a_j y^(j) = rhs``.

    ``alpha`` lists ``y(0), y'(0), ..., y^(r-1)(0)``; ``rhs`` may be None.
    The recursion only multiplies by the last companion row.
    """
    F = field or next(x.field for x in a if isinstance(x, Series))
    ensure_characteristic(F, N)
    last, forcing = companion_data(F, a, N, rhs)
    r = last.shape[0]
    b = F.zeros((r, N))
    b[r - 1] = forcing
    shape_only = SeriesMatrix(F, F.zeros((r, r, 0)), True)  # apply carries the coefficients
    y = solve(shape_only, SeriesVector(F, b, True), N, F.array(alpha).reshape(r), leaf,
              algorithm, apply=companion_apply(F, last, algorithm))
    return y.component(0)
