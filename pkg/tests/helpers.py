"""Direct residual arithmetic shared by the tests (schoolbook products only)."""

import numpy as np

from seriesolve import poly
from seriesolve.matrix import SeriesMatrix


def ode_residual_zero(A, Y, k, B=None):
    """``Y' - A Y (- B) = 0 mod t^k`` with A (r, r, *) and Y (r, c, *) data."""
    F = A.field
    Yd = Y.data
    lhs = poly.pad(F, Y.derivative().data, k)
    AY = F.reduce(poly.mul_naive(F, poly.pad(F, A.data, k)[:, :, None, :], Yd[None, :, :, :], k).sum(axis=1))
    res = F.sub(lhs, AY)
    if B is not None:
        res = F.sub(res, poly.pad(F, B.data, k))
    return not np.any(res != 0)


def identity_residual_zero(Y, Z, k):
    """``Y Z = I mod t^k``."""
    F = Y.field
    P = F.reduce(poly.mul_naive(F, poly.pad(F, Y.data, k)[:, :, None, :],
                                poly.pad(F, Z.data, k)[None, :, :, :], k).sum(axis=1))
    return SeriesMatrix(F, P, True) == SeriesMatrix.identity(F, Y.rows, k)
