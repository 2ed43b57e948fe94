"""Slow reference solvers by undetermined coefficients and Picard iteration.

Nothing here touches the Karatsuba/NTT kernels; every product is a plain
convolution, so these results are an independent check on the fast paths.
"""

from __future__ import annotations

import numpy as np

from . import poly
from .errors import NotOrdinaryPoint
from .field import ensure_characteristic
from .matrix import SeriesMatrix, SeriesVector
from .series import Series


def _conv_sum(F, terms):
    if F.dtype is object:
        return F.reduce(terms.sum(axis=0))
    return (terms % F.modulus).sum(axis=0) % F.modulus


def naive_solve_II(A: SeriesMatrix, b, N: int, v) -> SeriesMatrix:
    """``(k+1) y_{k+1} = sum_{i<=k} A_i y_{k-i} + b_k``, term by term.

    ``v`` may be a vector (problem II) or an r x c matrix (columnwise, problem
    I); ``b`` is then r x 1 or r x c, or None.
    """
    F = A.field
    ensure_characteristic(F, N)
    r = A.rows
    V = F.array(v).reshape(r, -1)
    c = V.shape[1]
    Ac = np.moveaxis(poly.pad(F, A.data, max(N - 1, 0)), -1, 0)  # (N-1, r, r)
    if b is None:
        bc = F.zeros((max(N - 1, 0), r, c))
    else:
        bc = np.moveaxis(poly.pad(F, b.data, max(N - 1, 0)), -1, 0).reshape(-1, r, c)
    y = F.zeros((N, r, c))
    y[0] = V
    inv = F.int_inverses(max(N - 1, 0))
    for k in range(N - 1):
        # (k+1, r, r, 1) * (k+1, 1, r, c) summed over i and the inner index
        terms = Ac[:k + 1, :, :, None] * y[k::-1][:, None, :, :]
        s = _conv_sum(F, _flatten_inner(terms))
        y[k + 1] = F.reduce(F.add(s, bc[k]) * inv[k + 1])
    out = np.moveaxis(y, 0, -1)
    cls = SeriesVector if c == 1 else SeriesMatrix
    return cls(F, np.ascontiguousarray(out), True)


def _flatten_inner(terms):
    # (k, r, r, c) -> (k*r, r, c): the summation runs over i and the inner index
    k, r, r2, c = terms.shape
    return np.moveaxis(terms, 2, 1).reshape(k * r2, r, c)


def _falling(F, N: int, j: int) -> np.ndarray:
    """``ff[m] = m (m-1) ... (m-j+1)`` for m < N."""
    ms = np.arange(N)
    out = F.array(np.ones(N, dtype=np.int64))
    for i in range(j):
        out = F.reduce(out * F.array(ms - i))
    return out


def naive_solve_scalar(a, rhs, alpha, N: int, field=None) -> Series:
    """Solve ``a_r y^(r) + ... + a_0 y = rhs`` with ``y^(k)(0) = alpha_k``.

    Extracting the coefficient of ``t^n`` gives ``y_{n+r}`` from lower
    coefficients through full convolutions.
    """
    F = field or next(x.field for x in a if isinstance(x, Series))
    ensure_characteristic(F, N)
    coeffs = [poly.pad(F, x.coeffs if isinstance(x, Series) else F.array(x), N) for x in a]
    r = len(coeffs) - 1
    if F.is_zero(coeffs[r][0]):
        raise NotOrdinaryPoint("a_r(0) = 0: t = 0 is not an ordinary point")
    rc = F.zeros(N) if rhs is None else poly.pad(
        F, rhs.coeffs if isinstance(rhs, Series) else F.array(rhs), N)
    ff = [_falling(F, N + r, j) for j in range(r + 1)]
    y = F.zeros(N)
    alpha = F.array(alpha).reshape(-1)
    ifact = F.inv_factorials(min(r, N))
    for k in range(min(r, N)):
        y[k] = F.reduce(alpha[k] * ifact[k])
    for n in range(N - r):
        total = rc[n]
        for j in range(r + 1):
            lo = 1 if j == r else 0  # skip the unknown y_{n+r}
            ls = np.arange(lo, n + 1)
            if len(ls) == 0:
                continue
            idx = n - ls + j
            terms = F.reduce(coeffs[j][ls] * ff[j][idx]) * y[idx]
            total = F.sub(total, _conv_sum(F, F.reduce(terms)))
        denom = F.reduce(ff[r][n + r] * coeffs[r][0])
        y[n + r] = F.reduce(total * F.inv(denom))
    return Series(F, y, True)


def picard_solve_nonlinear(phi, v, N: int, field=None) -> SeriesVector:
    """Fixed point of ``y -> v + int phi(t, y)``.

    A pass gains one correct coefficient, so pass k only needs precision
    k + 1; N passes give the first N coefficients.  Sparse polynomial systems
    are evaluated with schoolbook products.
    """
    from .nonlinear import SparsePolySystem, poly_system_evaluator

    F = field or getattr(phi, "field", None)
    if isinstance(phi, SparsePolySystem):
        phi = poly_system_evaluator(phi, F, algorithm="naive")
    ensure_characteristic(F, N)
    vv = F.array(v).reshape(-1)
    r = len(vv)
    y = SeriesVector.constant(F, vv, 1)
    for k in range(1, N + 1):
        n = min(k + 1, N)
        val = phi.phi(y.truncate(n), n - 1)
        integ = val.integral()
        data = integ.coeffs.copy()
        data[:, 0] = F.add(data[:, 0], vv)
        y = SeriesVector(F, data, True)
    return y.truncate(N)
