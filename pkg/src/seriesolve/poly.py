"""Batched truncated polynomial products on raw coefficient arrays.

Arrays hold coefficients on the last axis (lowest degree first) and
broadcast over the leading axes.  Three algorithms give identical results:
schoolbook, Karatsuba and NTT; ``mul`` picks one by size.
"""

from __future__ import annotations

import numpy as np

from . import counter
from .ntt import get_plan, ntt_available, transform_cost

NAIVE_THRESHOLD = 32
NTT_THRESHOLD = 512
# matrix products share transforms across entries, so the NTT pays off earlier
MAT_NTT_THRESHOLD = 64

ALGORITHMS = ("naive", "karatsuba", "ntt")


def _batch(*shapes) -> int:
    return int(np.prod(np.broadcast_shapes(*shapes), dtype=np.int64))


def _next_pow2(n: int) -> int:
    return 1 << max(n - 1, 0).bit_length()


def pad(F, a: np.ndarray, n: int) -> np.ndarray:
    """Truncate or zero-extend the last axis to length ``n``."""
    k = a.shape[-1]
    if k >= n:
        return a[..., :n]
    out = F.zeros(a.shape[:-1] + (n,))
    out[..., :k] = a
    return out


def mul_naive(F, a, b, n: int) -> np.ndarray:
    a = a[..., :n]
    b = b[..., :n]
    if a.shape[-1] > b.shape[-1]:
        a, b = b, a
    la, lb = a.shape[-1], b.shape[-1]
    out = F.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n,))
    word = F.dtype is not object
    cnt = 0
    for i in range(la):
        m = min(lb, n - i)
        if m <= 0:
            break
        seg = out[..., i:i + m]
        seg += a[..., i:i + 1] * b[..., :m]
        if word:
            np.remainder(seg, F.modulus, out=seg)
        cnt += m
    counter.add_field_muls(cnt * _batch(a.shape[:-1], b.shape[:-1]))
    return out if word else F.reduce(out)


def _karatsuba_full(F, a, b) -> np.ndarray:
    # a, b share the last-axis length L; returns the full product (2L-1 terms)
    L = a.shape[-1]
    if L <= NAIVE_THRESHOLD:
        return mul_naive(F, a, b, 2 * L - 1)
    m = (L + 1) // 2
    a0, a1 = a[..., :m], pad(F, a[..., m:], m)
    b0, b1 = b[..., :m], pad(F, b[..., m:], m)
    z0 = _karatsuba_full(F, a0, b0)
    z2 = _karatsuba_full(F, a1, b1)
    z1 = _karatsuba_full(F, F.add(a0, a1), F.add(b0, b1))
    z1 = F.reduce(z1 - z0 - z2)
    out = F.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (2 * L - 1,))
    out[..., :2 * m - 1] += z0
    out[..., m:3 * m - 1] += z1
    hi = 2 * L - 1 - 2 * m
    out[..., 2 * m:] += z2[..., :hi]
    return F.reduce(out)


def mul_karatsuba(F, a, b, n: int) -> np.ndarray:
    a = a[..., :n]
    b = b[..., :n]
    L = max(a.shape[-1], b.shape[-1])
    if L == 0:
        return F.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n,))
    full = _karatsuba_full(F, pad(F, a, L), pad(F, b, L))
    return pad(F, full, n)


def mul_ntt(F, a, b, n: int) -> np.ndarray:
    a = a[..., :n]
    b = b[..., :n]
    la, lb = a.shape[-1], b.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    if la == 0 or lb == 0:
        return F.zeros(shape + (n,))
    size = _next_pow2(la + lb - 1)
    plan = get_plan(F, size)
    fa = plan.forward(pad(F, a, size))
    fb = plan.forward(pad(F, b, size))
    c = plan.inverse(fa * fb % F.modulus)
    ntrans = _batch(a.shape[:-1]) + _batch(b.shape[:-1]) + _batch(shape)
    counter.add_field_muls(ntrans * transform_cost(size) + _batch(shape) * size)
    return pad(F, c, n)


def choose_algorithm(F, la: int, lb: int, n: int, algorithm: str | None = None) -> str:
    size = min(max(la, lb), n)
    full = min(la, n) + min(lb, n) - 1
    can_ntt = ntt_available(F, _next_pow2(max(full, 1)))
    if algorithm is None:
        if size < NAIVE_THRESHOLD:
            return "naive"
        if size < NTT_THRESHOLD or not can_ntt:
            return "karatsuba"
        return "ntt"
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm == "ntt" and not can_ntt:
        return "karatsuba"
    return algorithm


def mul(F, a, b, n: int, algorithm: str | None = None) -> np.ndarray:
    """``a * b mod t^n`` entrywise over broadcast leading axes."""
    alg = choose_algorithm(F, a.shape[-1], b.shape[-1], n, algorithm)
    if alg == "naive":
        return mul_naive(F, a, b, n)
    if alg == "karatsuba":
        return mul_karatsuba(F, a, b, n)
    return mul_ntt(F, a, b, n)


def matmul(F, A, B, n: int, algorithm: str | None = None) -> np.ndarray:
    """Polynomial matrix product ``A @ B mod t^n``; A is (r, c, la), B is (c, s, lb).

    With an NTT every entry is transformed once, the scalar matrices are
    multiplied pointwise per evaluation point, and the result is transformed
    back: r*c + c*s + r*s transforms instead of r*c*s full products.
    """
    r, c, la = A.shape
    c2, s, lb = B.shape
    if c != c2:
        raise ValueError("inner dimensions differ")
    A = A[..., :n]
    B = B[..., :n]
    la, lb = A.shape[-1], B.shape[-1]
    if n == 0 or la == 0 or lb == 0 or c == 0:
        return F.zeros((r, s, n))
    alg = choose_algorithm(F, la, lb, n, algorithm)
    if algorithm is None and min(max(la, lb), n) >= MAT_NTT_THRESHOLD \
            and ntt_available(F, _next_pow2(la + lb - 1)):
        alg = "ntt"
    if alg != "ntt":
        prods = mul(F, A[:, :, None, :], B[None, :, :, :], n, alg)
        return F.reduce(prods.sum(axis=1))
    p = F.modulus
    size = _next_pow2(la + lb - 1)
    plan = get_plan(F, size)
    fa = plan.forward(pad(F, A, size))
    fb = plan.forward(pad(F, B, size))
    acc = np.zeros((r, s, size), dtype=np.int64)
    for j in range(c):
        acc += fa[:, j, None, :] * fb[None, j, :, :] % p
        acc %= p
    out = plan.inverse(acc)
    counter.add_field_muls((r * c + c * s + r * s) * transform_cost(size) + r * c * s * size)
    return pad(F, out, n)
