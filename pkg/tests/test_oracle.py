"""The reference solvers against closed forms and their own defining equations."""

from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from seriesolve import poly
from seriesolve.errors import CharacteristicTooSmall, NotOrdinaryPoint
from seriesolve.field import PrimeField, Rationals
from seriesolve.matrix import SeriesMatrix, SeriesVector
from seriesolve.nonlinear import parse_poly_system
from seriesolve.oracle import naive_solve_II, naive_solve_scalar, picard_solve_nonlinear
from seriesolve.series import Series

from conftest import P

Q = Rationals()


def _exp_coeffs(F, N, c=1):
    return [F.scalar(Fraction(c ** k, factorial(k))) for k in range(N)]


def test_exponential(field):
    N = 40
    A = SeriesMatrix.constant(field, field.array([[1]]), 1)
    y = naive_solve_II(A, None, N, [1])
    assert y.coeffs[0].tolist() == _exp_coeffs(field, N)


def test_zero_matrix_keeps_constant(field):
    A = SeriesMatrix(field, field.zeros((3, 3, 5)), True)
    y = naive_solve_II(A, None, 20, [1, 2, 3])
    expect = field.zeros((3, 20))
    expect[:, 0] = field.array([1, 2, 3])
    assert np.array_equal(y.coeffs, expect)


def test_forcing_only():
    # y' = b(t) integrates b
    b = SeriesVector(Q, Q.array([[1, 2, 3, 4]]), True)
    A = SeriesMatrix(Q, Q.zeros((1, 1, 1)), True)
    y = naive_solve_II(A, b, 6, [5])
    assert y.coeffs[0].tolist() == [5, 1, 1, 1, 1, 0]


@pytest.mark.parametrize("N", [1, 2, 17, 64])
def test_residual_self_consistency(rng, N):
    r = 3
    A = SeriesMatrix(P, P.random(rng, (r, r, N)), True)
    b = SeriesVector(P, P.random(rng, (r, N)), True)
    v = P.random(rng, (r,))
    y = naive_solve_II(A, b, N, v)
    assert np.array_equal(y.coeffs[:, 0], v)
    k = N - 1
    Ay = P.reduce(poly.mul_naive(P, A.data[:, :, :k], y.coeffs[None, :, :k], k).sum(axis=1)) if k else P.zeros((r, 0))
    lhs = poly.pad(P, y.derivative().coeffs, k)
    assert np.array_equal(lhs, P.reduce(P.add(Ay, b.coeffs[:, :k])))


def test_matrix_initial_columns(rng):
    N, r = 12, 2
    A = SeriesMatrix(P, P.random(rng, (r, r, N)), True)
    V = P.random(rng, (r, r))
    Y = naive_solve_II(A, None, N, V)
    for j in range(r):
        assert np.array_equal(Y.data[:, j], naive_solve_II(A, None, N, V[:, j]).coeffs)


def test_cos(field):
    # y'' + y = 0, y(0) = 1, y'(0) = 0
    N = 30
    y = naive_solve_scalar([[1], [0], [1]], None, [1, 0], N, field)
    expect = [field.scalar(Fraction((-1) ** (k // 2), factorial(k))) if k % 2 == 0 else field.scalar(0)
              for k in range(N)]
    assert y.coeffs.tolist() == expect


def test_scalar_first_order_is_exp():
    y = naive_solve_scalar([[-2], [1]], None, [1], 12, Q)
    assert y.coeffs.tolist() == _exp_coeffs(Q, 12, 2)


def test_scalar_series_coefficients():
    # (1 - t) y' = y, y(0) = 1 gives 1 / (1 - t)
    y = naive_solve_scalar([Series(Q, Q.array([-1]), True), Series(Q, Q.array([1, -1]), True)],
                           None, [1], 10, Q)
    assert y.coeffs.tolist() == [1] * 10


def test_scalar_rhs():
    # y'' = 2 gives t^2 from zero data
    y = naive_solve_scalar([[0], [0], [1]], [2], [0, 0], 6, Q)
    assert y.coeffs.tolist() == [0, 0, 1, 0, 0, 0]


def test_scalar_errors():
    with pytest.raises(NotOrdinaryPoint):
        naive_solve_scalar([[1], [0, 1]], None, [1], 5, Q)
    with pytest.raises(CharacteristicTooSmall):
        naive_solve_scalar([[1], [1]], None, [1], 12, PrimeField(7))


def test_picard_zero_phi(field):
    sys_ = parse_poly_system(field, ["dy1 = 0", "dy2 = 0"])
    y = picard_solve_nonlinear(sys_, [3, 4], 9, field)
    expect = field.zeros((2, 9))
    expect[:, 0] = field.array([3, 4])
    assert np.array_equal(y.coeffs, expect)


def test_picard_linear_matches_naive(rng):
    sys_ = parse_poly_system(P, ["dy1 = 2*y1 + 3*y2", "dy2 = y1 + t"])
    y = picard_solve_nonlinear(sys_, [1, 1], 20, P)
    A = SeriesMatrix.constant(P, P.array([[2, 3], [1, 0]]), 1)
    b = SeriesVector(P, P.array([[0, 0], [0, 1]]), True)
    assert y == naive_solve_II(A, b, 20, [1, 1])


def test_picard_tan():
    # y' = 1 + y^2, y(0) = 0 is tan
    y = picard_solve_nonlinear(parse_poly_system(Q, ["dy1 = 1 + y1^2"]), [0], 10, Q)
    assert y.coeffs[0].tolist() == [0, 1, 0, Fraction(1, 3), 0, Fraction(2, 15), 0, Fraction(17, 315), 0,
                                    Fraction(62, 2835)]
