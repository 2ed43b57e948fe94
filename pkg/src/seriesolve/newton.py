"""Fundamental solutions of ``Y' = A Y (+ B)`` by Newton iteration.

Each doubling step updates the inverse ``Z`` of the current solution with
one Schulz step, then corrects ``Y`` by variation of parameters; both use
polynomial matrix products only, five per step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import ensure_characteristic
from .matrix import SeriesMatrix, mat_inverse_const, mat_mul


@dataclass
class HomSolution:
    Y: SeriesMatrix  # Y' = A Y mod t^{N-1}, Y(0) = Y0
    Z: SeriesMatrix  # Y Z = I mod t^{ceil(N/2)}


def newton_step(Y0: SeriesMatrix, Z0: SeriesMatrix, A: SeriesMatrix, m: int,
                prec: int | None = None, algorithm: str | None = None):
    """One doubling step from order (m/2, m-1) to order (m, 2m-1).

    Requires ``I - Y0 Z0 = 0 mod t^{m/2}`` and ``Y0' - A Y0 = 0 mod t^{m-1}``.
    Returns ``(Y, Z)`` with ``I - Y Z = 0 mod t^m`` and ``Y' - A Y = 0 mod
    t^{2m-1}``; ``prec`` (default 2m) caps the precision of the new ``Y``.
    """
    F = Y0.field
    r = Y0.rows
    if prec is None:
        prec = 2 * m
    Y0 = Y0.truncate(m)
    Z0 = Z0.truncate(m)
    # Z <- Z0 + Z0 (I - Y0 Z0) mod t^m
    E = SeriesMatrix.identity(F, r, m) - mat_mul(Y0, Z0, m, algorithm)
    Z = Z0 + mat_mul(Z0, E, m, algorithm)
    # Y <- Y0 - Y0 * int(Z (Y0' - A Y0)) mod t^prec
    k = prec - 1
    res = Y0.derivative().truncate(k) - mat_mul(A.truncate(k), Y0, k, algorithm)
    Q = mat_mul(Z, res, k, algorithm).integral()
    Y = Y0.truncate(prec) - mat_mul(Y0, Q, prec, algorithm)
    return Y, Z


def solve_hom(A: SeriesMatrix, N: int, Y0, algorithm: str | None = None) -> HomSolution:
    """Solve ``Y' = A Y``, ``Y(0) = Y0`` to precision ``N``.

    ``A`` needs its first ``N - 1`` coefficients.  Precisions double from 2;
    the final step is cut at ``N`` rather than the next power of two.
    """
    F = A.field
    if N < 1:
        raise ValueError("precision N must be positive")
    if A.rows != A.cols:
        raise ValueError("A must be square")
    ensure_characteristic(F, N)
    r = A.rows
    Y0 = F.array(Y0).reshape(r, r)
    Zc = mat_inverse_const(F, Y0)
    A = A.truncate(max(N - 1, 1))
    # Y <- (I + t A_0) Y0, Z <- Y0^{-1}
    y = F.zeros((r, r, 2))
    y[:, :, 0] = Y0
    y[:, :, 1] = F.matmul(A.data[:, :, 0], Y0)
    Y = SeriesMatrix(F, y, True).truncate(min(N, 2))
    Z = SeriesMatrix.constant(F, Zc, 1)
    m = 2
    while m < N:
        Y, Z = newton_step(Y, Z, A, m, prec=min(2 * m, N), algorithm=algorithm)
        m *= 2
    return HomSolution(Y.truncate(N), Z.truncate(max((N + 1) // 2, 1)))


def solve_inhom(A: SeriesMatrix, B: SeriesMatrix, N: int, Y0,
                algorithm: str | None = None) -> SeriesMatrix:
    """Solve ``Y' = A Y + B``, ``Y(0) = Y0`` to precision ``N``.

    ``B`` may be r x r or r x 1 (then ``Y0`` is a vector of initial values
    and the homogeneous part starts from the identity).
    """
    F = A.field
    r = A.rows
    vec = B.cols != r
    hom = solve_hom(A, N, F.identity(r) if vec else Y0, algorithm)
    Yt, Zt = hom.Y, hom.Z
    # Z <- Z + Z (I - Y Z) mod t^N
    E = SeriesMatrix.identity(F, r, N) - mat_mul(Yt, Zt.truncate(N), N, algorithm)
    Zt = Zt.truncate(N) + mat_mul(Zt.truncate(N), E, N, algorithm)
    P = mat_mul(Zt, B.truncate(max(N - 1, 0)), max(N - 1, 0), algorithm).integral()
    if vec:
        v = SeriesMatrix.constant(F, F.array(Y0).reshape(r, 1), N)
        P = P + v  # y = Y~ (v + int Z~ b)
        return mat_mul(Yt, P, N, algorithm)
    return mat_mul(Yt, P, N, algorithm) + Yt
