"""Constant and polynomial coefficients.

Constant coefficients go through the formal Laplace transform: the vector
``z = sum A^i v t^i`` is rational of degree at most r, so 2r + 1 Krylov
terms determine it, Padé recovers it and a linear recurrence expands it.
Polynomial coefficients give a short recurrence on the coefficients of y.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import counter, poly
from .config import max_threads
from .errors import NotOrdinaryPoint, PadeFailure
from .field import ensure_characteristic
from .matrix import SeriesMatrix, SeriesVector, mat_inverse_const
from .series import Series


# -- dense polynomials: 1-d arrays, lowest degree first, no trailing zeros --

def trim(F, a: np.ndarray) -> np.ndarray:
    k = len(a)
    while k and F.is_zero(a[k - 1]):
        k -= 1
    return a[:k]


def poly_mul(F, a, b) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return F.zeros(0)
    return trim(F, poly.mul_naive(F, a, b, len(a) + len(b) - 1))


def poly_divmod(F, a, b):
    """Quotient and remainder of dense polynomials; ``b`` must be nonzero."""
    a, b = trim(F, F.array(a)), trim(F, F.array(b))
    if len(b) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    lb = len(b)
    if len(a) < lb:
        return F.zeros(0), a.copy()
    inv = F.inv(b[-1])
    rem = a.copy()
    q = F.zeros(len(a) - lb + 1)
    for i in range(len(a) - lb, -1, -1):
        c = F.reduce(rem[i + lb - 1] * inv)
        q[i] = c
        if not F.is_zero(c):
            rem[i:i + lb] = F.sub(rem[i:i + lb], F.reduce(b * c))
    return q, trim(F, rem[:lb - 1])


def poly_gcd(F, a, b) -> np.ndarray:
    a, b = trim(F, F.array(a)), trim(F, F.array(b))
    while len(b):
        a, b = b, poly_divmod(F, a, b)[1]
    return a


@dataclass
class RationalFunction:
    """``numerator / denominator`` with ``denominator(0) = 1`` and no common factor."""

    field: object
    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        F = self.field
        self.numerator = trim(F, F.array(self.numerator))
        self.denominator = trim(F, F.array(self.denominator))
        if len(self.denominator) == 0 or F.is_zero(self.denominator[0]):
            raise PadeFailure("denominator must have a nonzero constant term")

    @property
    def degrees(self) -> tuple[int, int]:
        return len(self.numerator) - 1, len(self.denominator) - 1

    def __eq__(self, other):
        if not isinstance(other, RationalFunction) or self.field != other.field:
            return NotImplemented
        return (np.array_equal(self.numerator, other.numerator)
                and np.array_equal(self.denominator, other.denominator))


def _normalize(F, num, den) -> RationalFunction:
    den = trim(F, den)
    if len(den) == 0 or F.is_zero(den[0]):
        raise PadeFailure("Padé denominator vanishes at t = 0")
    g = poly_gcd(F, num, den)
    if len(g) > 1:
        num = poly_divmod(F, num, g)[0]
        den = poly_divmod(F, den, g)[0]
    c = F.inv(den[0])
    return RationalFunction(F, F.reduce(num * c), F.reduce(den * c))


def pade(u, r: int) -> RationalFunction:
    """The (r, r) Padé form of ``u`` from its first 2r + 1 coefficients.

    Extended Euclid on ``(t^(2r+1), u)`` stopped at the first remainder of
    degree at most r; the remainder is the numerator and its cofactor the
    denominator.
    """
    F = u.field
    k = 2 * r + 1
    if u.precision < k:
        raise ValueError(f"Padé of type ({r}, {r}) needs {k} coefficients, got {u.precision}")
    r0 = F.zeros(k + 1)
    r0[k] = F.scalar(1)
    r1 = trim(F, u.coeffs[:k].copy())
    s0, s1 = F.zeros(0), F.array([1])
    while len(r1) - 1 > r:
        q, rem = poly_divmod(F, r0, r1)
        r0, r1 = r1, rem
        qs = poly_mul(F, q, s1)
        n = max(len(s0), len(qs))
        s0, s1 = s1, trim(F, F.sub(poly.pad(F, s0, n), poly.pad(F, qs, n)))
    return _normalize(F, r1, s1)


# -- expansion --

def _expand_direct(F, num, den, n: int) -> list:
    den = den.tolist()
    num = num.tolist()
    d = len(den) - 1
    inv0 = F.inv(den[0])
    c = []
    for i in range(n):
        acc = num[i] if i < len(num) else 0
        for j in range(1, min(i, d) + 1):
            acc -= den[j] * c[i - j]
        c.append(F.reduce(acc * inv0))
    counter.add_field_muls(n * (d + 1))
    return c


def _expand_sliced(F, f: RationalFunction, n: int) -> np.ndarray:
    num, den = f.numerator, f.denominator
    d = len(den) - 1
    head = max(len(num), d)
    if d == 0 or n <= head + d:
        return F.array(_expand_direct(F, num, den, n)) if n else F.zeros(0)
    out = F.zeros(n)
    out[:head] = F.array(_expand_direct(F, num, den, head))
    # Beyond ``head`` the recurrence is homogeneous: one block of L terms is
    # a fixed linear image M of the d terms before it.
    L = max(d, isqrt(n))
    neg = F.neg(F.reduce(den[1:][::-1] * F.inv(den[0]))).reshape(1, d)  # pairs with c_{i-d} .. c_{i-1}
    ext = F.zeros((d + L, d))
    ext[:d] = F.identity(d)
    for k in range(L):
        ext[d + k] = F.matmul(neg, ext[k:k + d])[0]
    M = ext[d:]
    T = M[L - d:]
    nblocks = -(-(n - head) // L)
    S = F.zeros((d, nblocks))
    S[:, 0] = out[head - d:head]
    for b in range(1, nblocks):
        S[:, b] = F.matmul(T, S[:, b - 1:b])[:, 0]
    blocks = F.matmul(M, S)
    out[head:] = blocks.T.reshape(-1)[:n - head]
    return out


EXPAND_METHODS = ("recurrence", "sliced")


def expand_rational(f: RationalFunction, N: int, method: str = "recurrence") -> Series:
    """Coefficients ``0 .. N`` of ``num / den``.

    ``recurrence`` runs the linear recurrence of the denominator term by
    term; ``sliced`` precomputes the map from d consecutive terms to the
    next block and applies it with one matrix product.  Both give the same
    output.
    """
    F = f.field
    n = N + 1
    if method == "recurrence":
        return Series(F, F.array(_expand_direct(F, f.numerator, f.denominator, n)) if n else F.zeros(0), True)
    if method == "sliced":
        return Series(F, _expand_sliced(F, f, n), True)
    raise ValueError(f"unknown expansion method {method!r}")


# -- Laplace transform --

def _laplace_coeffs(F, c: np.ndarray, inverse: bool) -> np.ndarray:
    n = c.shape[-1]
    ensure_characteristic(F, n)
    w = F.inv_factorials(n) if inverse else F.factorials(n)
    counter.add_field_muls(c.size)
    return F.reduce(c * w)


def laplace(y):
    """``y_i -> i! y_i`` on a Series or SeriesVector."""
    return _laplace_apply(y, False)


def inverse_laplace(z):
    """``z_i -> z_i / i!``."""
    return _laplace_apply(z, True)


def _laplace_apply(y, inverse):
    F = y.field
    if isinstance(y, Series):
        return Series(F, _laplace_coeffs(F, y.coeffs, inverse), True)
    return SeriesVector(F, _laplace_coeffs(F, y.coeffs, inverse), True)


# -- Krylov --

@dataclass
class KrylovBlock:
    """Columns ``v, A v, ..., A^(2r) v`` of a scalar matrix A."""

    field: object
    columns: np.ndarray  # (r, 2r + 1)

    def spot_check(self, A, rng: np.random.Generator, samples: int = 3) -> bool:
        F = self.field
        k = self.columns.shape[1]
        for j in rng.integers(0, max(k - 1, 1), size=samples):
            if k < 2:
                break
            nxt = F.matmul(F.array(A), self.columns[:, j:j + 1])[:, 0]
            if not np.array_equal(nxt, self.columns[:, j + 1]):
                return False
        return True

    def series(self, j: int) -> Series:
        """``sum_i (A^i v)_j t^i`` to precision 2r + 1."""
        return Series(self.field, self.columns[j].copy(), True)


def krylov_doubling(F, A, v, count: int | None = None) -> KrylovBlock:
    """``A^i v`` for ``i < count`` (default 2r + 1) by repeated squaring.

    The block ``[v | ... | A^(k-1) v]`` doubles with one product by
    ``A^k``, so ``ceil(log2 count)`` squarings suffice.
    """
    A = F.array(A)
    r = A.shape[0]
    if count is None:
        count = 2 * r + 1
    block = F.array(v).reshape(r, 1)
    P = A
    while block.shape[1] < count:
        block = np.concatenate([block, F.matmul(P, block)], axis=1)
        if block.shape[1] < count:
            P = F.matmul(P, P)
    return KrylovBlock(F, np.ascontiguousarray(block[:, :count]))


def charpoly(F, A) -> np.ndarray:
    """Coefficients of ``det(x I - A)``, lowest degree first.

    Berkowitz's algorithm: no divisions, so it works in every
    characteristic.
    """
    A = F.array(A)
    n = A.shape[0]
    vect = F.array([1])  # highest degree first while building
    for k in range(n):
        a = A[k, k]
        R = A[k:k + 1, :k]
        C = A[:k, k:k + 1]
        col = [F.scalar(1), F.neg(a)]
        w = C
        for _ in range(k):
            col.append(F.neg(F.matmul(R, w)[0, 0]))
            w = F.matmul(A[:k, :k], w)
        col = F.array(col)
        new = F.zeros(k + 2)
        for i in range(k + 2):
            for j in range(min(i, k) + 1):
                new[i] = F.add(new[i], F.reduce(col[i - j] * vect[j]))
        vect = new
    return vect[::-1].copy()


# -- constant coefficients --

def solve_const_II(A, v, N: int, field=None, method: str = "sliced") -> SeriesVector:
    """``y' = A y``, ``y(0) = v`` for a constant matrix A, precision N.

    ``y_i = A^i v / i!``: each coordinate of the Laplace transform is
    rebuilt from 2r + 1 Krylov terms by Padé and expanded.
    """
    A, F = _scalar_matrix(A, field)
    r = A.shape[0]
    ensure_characteristic(F, N)
    v = F.array(v).reshape(r)
    if N == 0:
        return SeriesVector(F, F.zeros((r, 0)), True)
    kb = krylov_doubling(F, A, v)

    def column(j):
        return expand_rational(pade(kb.series(j), r), N - 1, method).coeffs

    # coordinates are independent and placed by index, so scheduling cannot
    # change the output; counted runs stay sequential to keep counts exact
    threads = min(max_threads(), r)
    if threads > 1 and counter.active() is None:
        with ThreadPoolExecutor(threads) as pool:
            cols = list(pool.map(column, range(r)))
    else:
        cols = [column(j) for j in range(r)]
    z = F.zeros((r, N))
    for j, c in enumerate(cols):
        z[j] = c
    return inverse_laplace(SeriesVector(F, z, True))


def solve_const_I(A, V0, N: int, field=None, method: str = "sliced") -> SeriesMatrix:
    """Fundamental matrix of ``Y' = A Y`` with ``Y(0) = V0``, column by column."""
    A, F = _scalar_matrix(A, field)
    r = A.shape[0]
    V0 = F.array(V0).reshape(r, r)
    mat_inverse_const(F, V0)  # SingularMatrix when V0 is not invertible
    out = F.zeros((r, r, N))
    for c in range(r):
        out[:, c, :] = solve_const_II(A, V0[:, c], N, F, method).coeffs
    return SeriesMatrix(F, out, True)


def _scalar_matrix(A, field):
    if isinstance(A, SeriesMatrix):
        return A.const_term(), A.field
    if field is None:
        raise ValueError("field is required for a plain scalar matrix")
    return field.array(A), field


def solve_const_ii(a, alpha, N: int, field=None, method: str = "sliced") -> Series:
    """``sum_k a_k y^(k) = 0`` with constant ``a_k`` and ``y^(k)(0) = alpha_k``.

    The Laplace transform ``z_i = i! y_i`` starts with ``z_k = alpha_k`` and
    satisfies ``sum_k a_k z_{i+k} = 0``.
    """
    F = field
    a = F.array(a).reshape(-1)
    r = len(a) - 1
    if r < 1:
        raise ValueError("equation order must be at least 1")
    if F.is_zero(a[r]):
        raise NotOrdinaryPoint("a_r = 0: t = 0 is not an ordinary point")
    ensure_characteristic(F, N)
    alpha = F.array(alpha).reshape(-1)
    if len(alpha) != r:
        raise ValueError(f"expected {r} initial values, got {len(alpha)}")
    if N == 0:
        return Series(F, F.zeros(0), True)
    inv = F.inv(a[r])
    den = F.reduce(a[::-1] * inv)  # den_j = a_{r-j} / a_r
    num = poly.mul_naive(F, alpha, den, r)  # (den * z) mod t^r
    f = RationalFunction(F, num, den)
    return inverse_laplace(expand_rational(f, N - 1, method))


def solve_const_i(a, N: int, field=None, method: str = "sliced") -> list:
    """Basis ``y_k`` with ``y_k^(j)(0) = [j = k]``, k < r."""
    F = field
    r = len(F.array(a).reshape(-1)) - 1
    out = []
    for k in range(r):
        alpha = F.zeros(r)
        alpha[k] = F.scalar(1)
        out.append(solve_const_ii(a, alpha, N, F, method))
    return out


# -- polynomial coefficients --

def solve_polycoeff_II(A: SeriesMatrix, b: SeriesVector | None, v, N: int) -> SeriesVector:
    """``y' = A y + b`` with A, b polynomial of degree at most d.

    ``(k+1) y_{k+1} = A_0 y_k + ... + A_d y_{k-d} + b_k``: each step costs
    (d + 1) r^2 multiplications.
    """
    F = A.field
    ensure_characteristic(F, N)
    r = A.rows
    d = max(A.precision - 1, 0)
    if b is not None:
        d = max(d, b.precision - 1)
    Ad = poly.pad(F, A.data, d + 1)
    # columns ordered so that a window y_{k-d} .. y_k lines up: A_d first
    W = np.concatenate([Ad[:, :, i] for i in range(d, -1, -1)], axis=1)  # (r, (d+1) r)
    bc = F.zeros((r, max(N, 1))) if b is None else poly.pad(F, b.coeffs, max(N, 1))
    y = F.zeros((r, N + d))  # d leading zeros stand for negative indices
    if N:
        y[:, d] = F.array(v).reshape(r)
    inv = F.int_inverses(max(N - 1, 0))
    for k in range(N - 1):
        window = y[:, k:k + d + 1].T.reshape(-1, 1)
        s = F.add(F.matmul(W, window)[:, 0], bc[:, k])
        y[:, d + k + 1] = F.reduce(s * inv[k + 1])
    return SeriesVector(F, np.ascontiguousarray(y[:, d:]), True)


def _falling_table(F, N: int, r: int) -> list:
    ms = np.arange(N)
    out = [F.array(np.ones(N, dtype=np.int64))]
    for j in range(1, r + 1):
        out.append(F.reduce(out[-1] * F.array(ms - j + 1)))
    return out


def solve_polycoeff_ii(a, alpha, N: int, field=None, rhs=None) -> Series:
    """``sum_j a_j(t) y^(j) = rhs`` with polynomial ``a_j`` of degree at most d.

    The coefficient of ``t^n`` reads
    ``sum_{j,l} a_{j,l} (n-l+j)!/(n-l)! y_{n-l+j} = 0``; the term
    ``j = r, l = 0`` carries the new coefficient ``y_{n+r}``.
    """
    F = field or next(x.field for x in a if isinstance(x, Series))
    rows = [x.coeffs if isinstance(x, Series) else F.array(x) for x in a]
    r = len(rows) - 1
    if r < 1:
        raise ValueError("equation order must be at least 1")
    d = max(max(len(x) for x in rows) - 1, 0)
    coeffs = np.stack([poly.pad(F, x, d + 1) for x in rows])  # (r+1, d+1)
    if F.is_zero(coeffs[r, 0]):
        raise NotOrdinaryPoint("a_r(0) = 0: t = 0 is not an ordinary point")
    ensure_characteristic(F, N)
    ff = _falling_table(F, max(N, 1), r)
    y = F.zeros(N + d)  # d leading zeros for negative indices
    alpha = F.array(alpha).reshape(-1)
    m = min(r, N)
    ifact = F.inv_factorials(m)
    y[d:d + m] = F.reduce(alpha[:m] * ifact)
    if N <= r:
        return Series(F, y[d:].copy(), True)
    rc = F.zeros(N) if rhs is None else poly.pad(
        F, rhs.coeffs if isinstance(rhs, Series) else F.array(rhs), N)
    js, ls = np.meshgrid(np.arange(r + 1), np.arange(d + 1), indexing="ij")
    keep = ~((js == r) & (ls == 0))
    js, ls = js[keep], ls[keep]
    w = coeffs[js, ls]
    lead = F.reduce(coeffs[r, 0] * ff[r][r:N])
    inv_lead = F.inv_array(lead)
    ffs = np.stack(ff)
    for n in range(N - r):
        idx = n - ls + js  # index into y (without the offset)
        valid = idx >= 0
        vals = F.reduce(w * ffs[js, np.maximum(idx, 0)]) * y[idx + d]
        vals = F.reduce(vals)
        total = F.sub(rc[n], _sum(F, vals[valid]))
        y[d + n + r] = F.reduce(total * inv_lead[n])
    counter.add_field_muls((N - r) * (len(w) * 2 + 1))
    return Series(F, y[d:].copy(), True)


def _sum(F, vals):
    if F.dtype is object:
        return F.reduce(vals.sum()) if len(vals) else F.scalar(0)
    return int(vals.sum() % F.modulus)
