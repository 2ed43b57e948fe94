"""Matrices and vectors of truncated series sharing one precision."""

from __future__ import annotations

import numpy as np

from . import counter, poly
from .errors import DimensionMismatch, MixedFields, SingularMatrix
from .field import FieldDescriptor
from .series import Series, differentiate_coeffs, integrate_coeffs


class SeriesMatrix:
    """An r x c array of series, stored as one (r, c, n) coefficient array."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldDescriptor, data, _canonical: bool = False):
        arr = data if _canonical else field.array(data)
        if arr.ndim != 3:
            raise ValueError("matrix data must have shape (rows, cols, precision)")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @classmethod
    def zero(cls, field, r: int, c: int, n: int):
        return cls(field, field.zeros((r, c, n)), True)

    @classmethod
    def identity(cls, field, r: int, n: int):
        d = field.zeros((r, r, n))
        if n:
            d[:, :, 0] = field.identity(r)
        return cls(field, d, True)

    @classmethod
    def constant(cls, field, m, n: int):
        m = field.array(m)
        d = field.zeros(m.shape + (n,))
        if n:
            d[..., 0] = m
        return cls(field, d, True)

    @classmethod
    def from_entries(cls, field, rows):
        """Build from nested lists of Series or coefficient lists."""
        entries = [[e.coeffs if isinstance(e, Series) else field.array(e) for e in row] for row in rows]
        n = max((len(e) for row in entries for e in row), default=0)
        d = field.zeros((len(entries), len(entries[0]) if entries else 0, n))
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                d[i, j, :len(e)] = e
        return cls(field, d, True)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def precision(self) -> int:
        return self.data.shape[2]

    def __getitem__(self, ij) -> Series:
        i, j = ij
        return Series(self.field, self.data[i, j].copy(), True)

    def const_term(self) -> np.ndarray:
        if self.precision == 0:
            raise ValueError("precision-0 matrix has no constant term")
        return self.data[:, :, 0].copy()

    def truncate(self, n: int):
        return type(self)(self.field, poly.pad(self.field, self.data, n).copy(), True)

    def _wrap(self, data):
        return type(self)(self.field, data, True)

    def _check(self, other):
        if self.field != other.field:
            raise MixedFields(f"{self.field!r} vs {other.field!r}")
        if self.data.shape[:2] != other.data.shape[:2]:
            raise DimensionMismatch(f"{self.data.shape[:2]} vs {other.data.shape[:2]}")
        return min(self.precision, other.precision)

    def __add__(self, other):
        n = self._check(other)
        return self._wrap(self.field.add(self.data[..., :n], other.data[..., :n]))

    def __sub__(self, other):
        n = self._check(other)
        return self._wrap(self.field.sub(self.data[..., :n], other.data[..., :n]))

    def __neg__(self):
        return self._wrap(self.field.neg(self.data))

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return (self.field == other.field and self.data.shape == other.data.shape
                and bool(np.all(self.data == other.data)))

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.field!r}, {self.rows}x{self.cols}, precision={self.precision})"

    def to_text(self) -> str:
        """Row-major, one entry series per line."""
        F = self.field
        return "\n".join(" ".join(F.format(c) for c in self.data[i, j])
                         for i in range(self.rows) for j in range(self.cols))

    def derivative(self):
        return self._wrap(differentiate_coeffs(self.field, self.data))

    def integral(self):
        return self._wrap(integrate_coeffs(self.field, self.data))


class SeriesVector(SeriesMatrix):
    """An r x 1 series matrix."""

    __slots__ = ()

    def __init__(self, field, data, _canonical: bool = False):
        arr = data if _canonical else field.array(data)
        if arr.ndim == 2:
            arr = arr[:, None, :]
        if arr.ndim != 3 or arr.shape[1] != 1:
            raise ValueError("vector data must have shape (r, n) or (r, 1, n)")
        super().__init__(field, arr, True)

    @classmethod
    def from_series(cls, field, entries):
        return cls(field, SeriesMatrix.from_entries(field, [[e] for e in entries]).data.copy(), True)

    @classmethod
    def constant(cls, field, v, n: int):
        v = field.array(v).reshape(-1)
        d = field.zeros((len(v), 1, n))
        if n:
            d[:, 0, 0] = v
        return cls(field, d, True)

    @property
    def coeffs(self) -> np.ndarray:
        """Coefficients as an (r, n) array."""
        return self.data[:, 0, :]

    def component(self, i: int) -> Series:
        return self[i, 0]

    def __len__(self):
        return self.rows


def as_vector(m: SeriesMatrix) -> SeriesVector:
    return SeriesVector(m.field, m.data, True)


def mat_mul(Fm: SeriesMatrix, Gm: SeriesMatrix, n: int | None = None,
            algorithm: str | None = None) -> SeriesMatrix:
    """``F G mod t^n`` (default: the smaller precision)."""
    if Fm.field != Gm.field:
        raise MixedFields(f"{Fm.field!r} vs {Gm.field!r}")
    if Fm.cols != Gm.rows:
        raise DimensionMismatch(f"cannot multiply {Fm.rows}x{Fm.cols} by {Gm.rows}x{Gm.cols}")
    if n is None:
        n = min(Fm.precision, Gm.precision)
    counter.record_mat_mul(Fm.rows, n)
    out = poly.matmul(Fm.field, Fm.data, Gm.data, n, algorithm)
    cls = SeriesVector if Gm.cols == 1 else SeriesMatrix
    return cls(Fm.field, out, True)


def mat_inverse_const(F: FieldDescriptor, M) -> np.ndarray:
    """Exact inverse of a scalar matrix by Gauss-Jordan elimination."""
    M = F.array(M)
    r, c = M.shape
    if r != c:
        raise DimensionMismatch(f"cannot invert a {r}x{c} matrix")
    a = [[F.scalar(M[i, j]) for j in range(r)] + [F.scalar(int(i == j)) for j in range(r)]
         for i in range(r)]
    for col in range(r):
        piv = next((i for i in range(col, r) if not F.is_zero(a[i][col])), None)
        if piv is None:
            raise SingularMatrix("constant matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = F.inv(a[col][col])
        a[col] = [F.reduce(x * inv) for x in a[col]]
        for i in range(r):
            if i != col and not F.is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [F.reduce(x - f * y) for x, y in zip(a[i], a[col])]
    counter.record_unit_inversion(r)
    return F.array([row[r:] for row in a]).reshape(r, r)


def schulz_step(Z: SeriesMatrix, Y: SeriesMatrix, m: int) -> SeriesMatrix:
    """``Z + Z (I - Y Z) mod t^m``: doubles the order of ``I - Y Z``."""
    F = Z.field
    r = Y.rows
    E = SeriesMatrix.identity(F, r, m) - mat_mul(Y, Z.truncate(m), m)
    return Z.truncate(m) + mat_mul(Z.truncate(m), E, m)


def mat_series_inverse(Y: SeriesMatrix, n: int) -> SeriesMatrix:
    """``Y^{-1} mod t^n`` by doubling Schulz steps from ``Y(0)^{-1}``."""
    F = Y.field
    Z = SeriesMatrix.constant(F, mat_inverse_const(F, Y.const_term()), 1)
    k = 1
    while k < n:
        k = min(2 * k, n)
        Z = schulz_step(Z, Y, k)
    return Z.truncate(n)
