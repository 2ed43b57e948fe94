"""Radix-2 number theoretic transform over word-sized primes.

The forward transform is decimation-in-frequency and leaves its output in
bit-reversed order; the inverse is the matching decimation-in-time pass that
consumes bit-reversed input.  Pointwise products don't care about the order,
so no permutation is ever materialised.  Both transforms act on the last
axis and are batched over the leading ones.
"""

from __future__ import annotations

import threading

import numpy as np

_plans: dict[tuple[int, int], "NTTPlan"] = {}
_lock = threading.Lock()


def _root_table(w: int, half: int, p: int) -> np.ndarray:
    """``[w**0, w**1, ..., w**(half-1)] mod p`` by doubling."""
    t = np.ones(max(half, 1), dtype=np.int64)
    k = 1
    while k < half:
        step = pow(w, k, p)
        m = min(k, half - k)
        t[k:k + m] = t[:m] * step % p
        k *= 2
    return t[:half]


class NTTPlan:
    def __init__(self, p: int, size: int, g: int):
        if size & (size - 1):
            raise ValueError("NTT size must be a power of two")
        if (p - 1) % size:
            raise ValueError(f"no {size}-th root of unity mod {p}")
        self.p = p
        self.size = size
        w = pow(g, (p - 1) // size, p)
        half = size // 2
        full = _root_table(w, half, p)
        full_inv = _root_table(pow(w, -1, p), half, p)
        # twiddles for butterfly half-width h: (w_{2h})^j = w^{j * size/(2h)}
        self.tw = {}
        self.tw_inv = {}
        h = half
        while h >= 1:
            stride = half // h
            self.tw[h] = np.ascontiguousarray(full[::stride][:h])
            self.tw_inv[h] = np.ascontiguousarray(full_inv[::stride][:h])
            h //= 2
        self.size_inv = pow(size, -1, p)

    def forward(self, a: np.ndarray) -> np.ndarray:
        p, n = self.p, self.size
        lead = a.shape[:-1]
        x = np.ascontiguousarray(a, dtype=np.int64).reshape(-1, n)
        b = x.shape[0]
        h = n // 2
        while h >= 1:
            x = x.reshape(b, n // (2 * h), 2, h)
            u = x[:, :, 0, :]
            v = x[:, :, 1, :]
            out = np.empty_like(x)
            s = out[:, :, 0, :]
            np.add(u, v, out=s)
            s[s >= p] -= p
            d = out[:, :, 1, :]
            np.subtract(u, v, out=d)
            d[d < 0] += p
            np.multiply(d, self.tw[h], out=d)
            np.remainder(d, p, out=d)
            x = out
            h //= 2
        return x.reshape(*lead, n)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        p, n = self.p, self.size
        lead = a.shape[:-1]
        x = np.ascontiguousarray(a, dtype=np.int64).reshape(-1, n)
        b = x.shape[0]
        h = 1
        while h < n:
            x = x.reshape(b, n // (2 * h), 2, h)
            u = x[:, :, 0, :]
            v = x[:, :, 1, :] * self.tw_inv[h] % p
            out = np.empty_like(x)
            s = out[:, :, 0, :]
            np.add(u, v, out=s)
            s[s >= p] -= p
            d = out[:, :, 1, :]
            np.subtract(u, v, out=d)
            d[d < 0] += p
            x = out
            h *= 2
        x = x.reshape(b, n) * self.size_inv % p
        return x.reshape(*lead, n)


def get_plan(field, size: int) -> NTTPlan:
    key = (field.modulus, size)
    plan = _plans.get(key)
    if plan is None:
        with _lock:
            plan = _plans.get(key)
            if plan is None:
                plan = NTTPlan(field.modulus, size, field.primitive_root())
                _plans[key] = plan
    return plan


def ntt_available(field, size: int) -> bool:
    return getattr(field, "word", False) and size <= (1 << field.two_adicity)


def transform_cost(size: int) -> int:
    """Field multiplications charged for one transform of the given size."""
    return (size // 2) * max(size.bit_length() - 1, 0)
