"""Exact coefficient fields: Z/pZ for a prime p, and the rationals.

Coefficient vectors are numpy arrays.  Primes below 2**31 use ``int64``
storage (a product of two residues fits in 63 bits); larger primes and the
rationals use ``object`` arrays of Python ints / ``Fraction``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import counter
from .errors import CharacteristicTooSmall, DivisionByZero, MixedFields

WORD_LIMIT = 1 << 31


def is_probable_prime(n: int, rounds: int = 40) -> bool:
    """Miller-Rabin; with 40 random bases a composite passes with probability < 2**-80."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    bases = list(small) + [rng.randrange(2, n - 1) for _ in range(rounds)]
    for a in bases:
        a %= n
        if a < 2:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _powmod_vec(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _cumprod_mod(vals: np.ndarray, p: int) -> np.ndarray:
    # blocked prefix product: sqrt(n) vectorized column steps + sqrt(n) scalar steps
    n = len(vals)
    if n == 0:
        return vals.copy()
    b = max(1, math.isqrt(n))
    nb = -(-n // b)
    m = np.ones(nb * b, dtype=np.int64)
    m[:n] = vals
    m = m.reshape(nb, b)
    for j in range(1, b):
        m[:, j] = m[:, j] * m[:, j - 1] % p
    pref = np.empty(nb, dtype=np.int64)
    acc = 1
    for i in range(nb):
        pref[i] = acc
        acc = acc * int(m[i, -1]) % p
    m = m * pref[:, None] % p
    return m.reshape(-1)[:n]


class FieldDescriptor:
    """Common interface of the coefficient fields."""

    kind: str
    modulus: int | None

    def characteristic(self) -> int:
        raise NotImplementedError

    def __call__(self, value) -> FieldScalar:
        return FieldScalar(self, self.scalar(value))

    # array helpers -----------------------------------------------------
    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def identity(self, r: int) -> np.ndarray:
        m = self.zeros((r, r))
        for i in range(r):
            m[i, i] = self.scalar(1)
        return m

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def neg(self, a):
        return self.reduce(-a)

    def mul(self, a, b):
        return self.reduce(a * b)

    def matmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of scalar matrices (supports numpy batching)."""
        batch = int(np.prod(np.broadcast_shapes(x.shape[:-2], y.shape[:-2]), dtype=np.int64))
        counter.add_field_muls(batch * x.shape[-2] * x.shape[-1] * y.shape[-1])
        return self.reduce(np.matmul(x, y))


@dataclass(frozen=True, eq=True)
class PrimeField(FieldDescriptor):
    modulus: int
    kind: str = "prime_field"

    def __post_init__(self):
        if not isinstance(self.modulus, int) or not is_probable_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus!r} is not prime")

    def __repr__(self):
        return f"PrimeField({self.modulus})"

    def characteristic(self) -> int:
        return self.modulus

    @property
    def word(self) -> bool:
        return self.modulus < WORD_LIMIT

    @property
    def dtype(self):
        return np.int64 if self.word else object

    @property
    def two_adicity(self) -> int:
        """Largest k with 2**k dividing p - 1 (0 when NTT is unusable)."""
        if not self.word:
            return 0
        k, q = 0, self.modulus - 1
        while q % 2 == 0:
            q //= 2
            k += 1
        return k

    def primitive_root(self) -> int:
        return _primitive_root(self.modulus)

    # scalars -----------------------------------------------------------
    def scalar(self, value) -> int:
        if isinstance(value, FieldScalar):
            if value.field != self:
                raise MixedFields(f"{value.field!r} value used in {self!r}")
            return value.value
        if isinstance(value, Fraction):
            if value.denominator % self.modulus == 0:
                raise DivisionByZero(f"denominator of {value} vanishes mod {self.modulus}")
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        return int(value) % self.modulus

    def inv(self, x) -> int:
        x = self.scalar(x)
        if x == 0:
            raise DivisionByZero(f"inverse of 0 in {self!r}")
        return pow(x, -1, self.modulus)

    def is_zero(self, x) -> bool:
        return self.scalar(x) == 0

    def parse(self, text: str) -> int:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.scalar(Fraction(int(num), int(den)))
        return int(text) % self.modulus

    def format(self, x) -> str:
        return str(int(x))

    # arrays ------------------------------------------------------------
    def array(self, values) -> np.ndarray:
        if isinstance(values, np.ndarray) and values.dtype == np.int64 and self.word:
            return values % self.modulus
        vals = np.asarray(values, dtype=object)
        flat = [self.scalar(v) for v in vals.reshape(-1)]
        return np.array(flat, dtype=self.dtype).reshape(vals.shape)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def reduce(self, a):
        return a % self.modulus

    def inv_array(self, a: np.ndarray) -> np.ndarray:
        if np.any(a == 0):
            raise DivisionByZero("array contains 0")
        if self.word:
            return _powmod_vec(np.asarray(a, dtype=np.int64), self.modulus - 2, self.modulus)
        flat = [pow(int(x), -1, self.modulus) for x in a.reshape(-1)]
        return np.array(flat, dtype=object).reshape(a.shape)

    def matmul(self, x, y):
        if not self.word:
            return super().matmul(x, y)
        counter.add_field_muls(x.shape[-2] * x.shape[-1] * y.shape[-1])
        p = self.modulus
        hi, lo = x >> 16, x & 0xFFFF
        return ((np.matmul(hi, y) % p) * 65536 + np.matmul(lo, y)) % p

    def int_inverses(self, n: int) -> np.ndarray:
        """Array ``inv`` of length n+1 with ``inv[k] = 1/k`` (``inv[0] = 0``)."""
        ensure_characteristic(self, n + 1)
        out = self.zeros(n + 1)
        if n == 0:
            return out
        ks = np.arange(1, n + 1, dtype=np.int64 if self.word else object)
        out[1:] = self.inv_array(ks)
        return out

    def factorials(self, n: int) -> np.ndarray:
        """``[0!, 1!, ..., (n-1)!]`` reduced mod p."""
        if n == 0:
            return self.zeros(0)
        if self.word:
            vals = np.arange(n, dtype=np.int64)
            vals[0] = 1
            return _cumprod_mod(vals, self.modulus)
        out = self.zeros(n)
        acc = 1
        for i in range(n):
            if i:
                acc = acc * i % self.modulus
            out[i] = acc
        return out

    def inv_factorials(self, n: int) -> np.ndarray:
        ensure_characteristic(self, n)
        return self.inv_array(self.factorials(n))

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.word:
            return rng.integers(0, self.modulus, size=shape, dtype=np.int64)
        flat = [int(rng.integers(0, 1 << 62)) * (1 << 62) + int(rng.integers(0, 1 << 62))
                for _ in range(int(np.prod(shape, dtype=np.int64)))]
        return self.array(np.array(flat, dtype=object).reshape(shape))

    def spec(self) -> str:
        return f"p:{self.modulus}"


@dataclass(frozen=True, eq=True)
class Rationals(FieldDescriptor):
    kind: str = "rationals"
    modulus: None = None

    def __repr__(self):
        return "Rationals()"

    def characteristic(self) -> int:
        return 0

    dtype = object
    word = False
    two_adicity = 0

    def scalar(self, value) -> Fraction:
        if isinstance(value, FieldScalar):
            if value.field != self:
                raise MixedFields(f"{value.field!r} value used in {self!r}")
            return value.value
        return Fraction(value)

    def inv(self, x) -> Fraction:
        x = self.scalar(x)
        if x == 0:
            raise DivisionByZero("inverse of 0 in Rationals()")
        return 1 / x

    def is_zero(self, x) -> bool:
        return x == 0

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def format(self, x) -> str:
        return str(Fraction(x))

    def array(self, values) -> np.ndarray:
        vals = np.asarray(values, dtype=object)
        flat = [Fraction(v) for v in vals.reshape(-1)]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(vals.shape)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def reduce(self, a):
        return a

    def inv_array(self, a):
        if np.any(a == 0):
            raise DivisionByZero("array contains 0")
        return self.array([1 / Fraction(x) for x in a.reshape(-1)]).reshape(a.shape)

    def int_inverses(self, n: int) -> np.ndarray:
        out = self.zeros(n + 1)
        for k in range(1, n + 1):
            out[k] = Fraction(1, k)
        return out

    def factorials(self, n: int) -> np.ndarray:
        out = self.zeros(n)
        acc = 1
        for i in range(n):
            if i:
                acc *= i
            out[i] = Fraction(acc)
        return out

    def inv_factorials(self, n: int) -> np.ndarray:
        return self.array([1 / f for f in self.factorials(n)])

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        size = int(np.prod(shape, dtype=np.int64))
        nums = rng.integers(-9, 10, size=size)
        dens = rng.integers(1, 5, size=size)
        return self.array([Fraction(int(a), int(b)) for a, b in zip(nums, dens)]).reshape(shape)

    def spec(self) -> str:
        return "q"


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


def parse_field(text: str) -> FieldDescriptor:
    """``"p:<modulus>"`` or ``"q"``."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return Rationals()
    if text.startswith("p:"):
        return PrimeField(int(text[2:]))
    raise ValueError(f"unknown field {text!r}; expected 'p:<modulus>' or 'q'")


def ensure_characteristic(field: FieldDescriptor, n: int) -> None:
    """Raise unless the characteristic is 0 or at least ``n``."""
    c = field.characteristic()
    if c != 0 and c < n:
        raise CharacteristicTooSmall(
            f"characteristic {c} < {n}: divisions by 1..{n - 1} are not all defined"
        )


@dataclass(frozen=True)
class FieldScalar:
    field: FieldDescriptor
    value: object

    def _other(self, other):
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise MixedFields(f"{self.field!r} vs {other.field!r}")
            return other.value
        return self.field.scalar(other)

    def __add__(self, other):
        return field_arith(self, other, "add")

    def __sub__(self, other):
        return field_arith(self, other, "sub")

    def __mul__(self, other):
        return field_arith(self, other, "mul")

    def __truediv__(self, other):
        return field_arith(self, other, "div")

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return FieldScalar(self.field, self.field.scalar(other)) - self

    def __rtruediv__(self, other):
        return FieldScalar(self.field, self.field.scalar(other)) / self

    def __neg__(self):
        return FieldScalar(self.field, self.field.reduce(-self.value))

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.scalar(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def inverse(self):
        return FieldScalar(self.field, self.field.inv(self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"FieldScalar({self.field!r}, {self.field.format(self.value)})"


def field_arith(a: FieldScalar, b, op: str) -> FieldScalar:
    """Exact ``a <op> b`` for op in add/sub/mul/div."""
    f = a.field
    x, y = a.value, a._other(b)
    if op == "add":
        v = x + y
    elif op == "sub":
        v = x - y
    elif op == "mul":
        v = x * y
    elif op == "div":
        v = x * f.inv(y)
    else:
        raise ValueError(f"unknown op {op!r}")
    return FieldScalar(f, f.reduce(v) if f.kind == "prime_field" else Fraction(v))
