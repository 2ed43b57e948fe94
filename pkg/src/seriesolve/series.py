"""Truncated power series ``f mod t^n`` over an exact field."""

from __future__ import annotations

import numpy as np

from . import counter, poly
from .errors import IndexOutOfRange, MixedFields, NotInvertible
from .field import FieldDescriptor, FieldScalar, ensure_characteristic


class Series:
    """Coefficients ``c_0 .. c_{n-1}`` of a series known modulo ``t^n``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs, _canonical: bool = False):
        arr = coeffs if _canonical else field.array(coeffs)
        if arr.ndim != 1:
            raise ValueError("series coefficients must be one-dimensional")
        arr.setflags(write=False)
        self.field = field
        self.coeffs = arr

    @classmethod
    def zero(cls, field, n: int) -> Series:
        return cls(field, field.zeros(n), True)

    @classmethod
    def one(cls, field, n: int) -> Series:
        a = field.zeros(n)
        if n:
            a[0] = field.scalar(1)
        return cls(field, a, True)

    @classmethod
    def from_text(cls, field, text: str) -> Series:
        return cls(field, field.array([field.parse(tok) for tok in text.split()]), True)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> FieldScalar:
        if not 0 <= i < len(self.coeffs):
            raise IndexOutOfRange(f"coefficient {i} of a series of precision {len(self.coeffs)}")
        return FieldScalar(self.field, self.coeffs[i])

    def values(self) -> list:
        return list(self.coeffs)

    def to_text(self) -> str:
        return " ".join(self.field.format(c) for c in self.coeffs)

    def __repr__(self):
        return f"Series({self.field!r}, [{self.to_text()}])"

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.field == other.field and self.precision == other.precision
                and bool(np.all(self.coeffs == other.coeffs)))

    __hash__ = None

    def _check(self, other: Series) -> None:
        if self.field != other.field:
            raise MixedFields(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        self._check(other)
        n = min(self.precision, other.precision)
        return Series(self.field, self.field.add(self.coeffs[:n], other.coeffs[:n]), True)

    def __sub__(self, other):
        self._check(other)
        n = min(self.precision, other.precision)
        return Series(self.field, self.field.sub(self.coeffs[:n], other.coeffs[:n]), True)

    def __neg__(self):
        return Series(self.field, self.field.neg(self.coeffs), True)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other, min(self.precision, other.precision))
        c = self.field.scalar(other)
        return Series(self.field, self.field.reduce(self.coeffs * c), True)

    __rmul__ = __mul__


def _same_field(f: Series, g: Series):
    if f.field != g.field:
        raise MixedFields(f"{f.field!r} vs {g.field!r}")
    return f.field


def mul(f: Series, g: Series, n: int | None = None, algorithm: str | None = None) -> Series:
    """``f * g mod t^n`` (default ``n``: the smaller precision)."""
    F = _same_field(f, g)
    if n is None:
        n = min(f.precision, g.precision)
    counter.record_poly_mul(n)
    return Series(F, poly.mul(F, f.coeffs, g.coeffs, n, algorithm), True)


def low(f: Series, k: int) -> Series:
    """``f mod t^k``."""
    if not 0 <= k <= f.precision:
        raise IndexOutOfRange(f"low({k}) of a series of precision {f.precision}")
    return Series(f.field, f.coeffs[:k].copy(), True)


def high(f: Series, k: int) -> Series:
    """``f div t^k``, precision ``n - k``."""
    if not 0 <= k <= f.precision:
        raise IndexOutOfRange(f"high({k}) of a series of precision {f.precision}")
    return Series(f.field, f.coeffs[k:].copy(), True)


def mid(f: Series, k: int, l: int) -> Series:
    """``(f mod t^l) div t^k``, precision ``l - k``."""
    if not 0 <= k <= l <= f.precision:
        raise IndexOutOfRange(f"mid({k}, {l}) of a series of precision {f.precision}")
    return Series(f.field, f.coeffs[k:l].copy(), True)


def shift(f: Series, k: int) -> Series:
    """``t^k * f``, precision ``n + k``."""
    out = f.field.zeros(f.precision + k)
    out[k:] = f.coeffs
    return Series(f.field, out, True)


def integrate_coeffs(F, a: np.ndarray) -> np.ndarray:
    """Primitive with zero constant term along the last axis (length grows by one)."""
    n = a.shape[-1]
    ensure_characteristic(F, n + 1)
    inv = F.int_inverses(n)
    counter.record_int_divisors(range(1, n + 1))
    counter.add_field_muls(a.size)
    out = F.zeros(a.shape[:-1] + (n + 1,))
    out[..., 1:] = F.reduce(a * inv[1:])
    return out


def differentiate_coeffs(F, a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    if n == 0:
        raise IndexOutOfRange("cannot differentiate a series of precision 0")
    ks = F.array(np.arange(1, n)) if n > 1 else F.zeros(0)
    return F.reduce(a[..., 1:] * ks)


def integrate(f: Series) -> Series:
    return Series(f.field, integrate_coeffs(f.field, f.coeffs), True)


def differentiate(f: Series) -> Series:
    return Series(f.field, differentiate_coeffs(f.field, f.coeffs), True)


def series_inverse(f: Series, n: int | None = None, algorithm: str | None = None) -> Series:
    """``g`` with ``f * g = 1 mod t^n`` by Newton doubling."""
    F = f.field
    if n is None:
        n = f.precision
    if f.precision == 0 or F.is_zero(f.coeffs[0]):
        raise NotInvertible("series with zero constant term is not invertible")
    counter.record_unit_inversion()
    g = F.zeros(1)
    g[0] = F.inv(f.coeffs[0])
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = poly.mul(F, f.coeffs, g, k, algorithm)  # f*g = 1 + O(t^{k/2})
        e = F.neg(e)
        e[0] = F.reduce(e[0] + F.scalar(1))
        g = F.add(poly.pad(F, g, k), poly.mul(F, g, e, k, algorithm))
    return Series(F, poly.pad(F, g, n), True)
