from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seriesolve.errors import CharacteristicTooSmall, DivisionByZero, MixedFields
from seriesolve.field import (
    FieldScalar,
    PrimeField,
    Rationals,
    ensure_characteristic,
    field_arith,
    is_probable_prime,
    parse_field,
)

P7 = PrimeField(7)
Q = Rationals()


def test_inverse_mod_7():
    three = P7(3)
    assert three.inverse() == 5
    assert field_arith(P7(1), three, "div") == P7(5)


def test_rational_sum():
    assert Q(Fraction(1, 2)) + Q(Fraction(1, 3)) == Fraction(5, 6)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        field_arith(P7(4), P7(0), "div")
    with pytest.raises(DivisionByZero):
        Q(1) / 0


def test_mixed_fields():
    with pytest.raises(MixedFields):
        P7(1) + PrimeField(11)(1)


@pytest.mark.parametrize("F,N,ok", [(PrimeField(101), 100, True), (PrimeField(101), 102, False),
                                     (Q, 10**6, True)])
def test_ensure_characteristic(F, N, ok):
    if ok:
        ensure_characteristic(F, N)
    else:
        with pytest.raises(CharacteristicTooSmall):
            ensure_characteristic(F, N)


def test_characteristic_values():
    assert P7.characteristic() == 7
    assert Q.characteristic() == 0


def test_non_prime_modulus_rejected():
    with pytest.raises(ValueError):
        PrimeField(2013265923)
    with pytest.raises(ValueError):
        PrimeField(561)  # Carmichael number


def test_primality():
    assert is_probable_prime(2**61 - 1)
    assert is_probable_prime(2013265921)
    assert not is_probable_prime(2**61 + 1)
    assert not is_probable_prime(1)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 31, 61, 97])
def test_exhaustive_inverses(p):
    F = PrimeField(p)
    a = np.arange(1, p, dtype=np.int64)
    assert np.all(F.reduce(a * F.inv_array(a)) == 1)
    for x in range(1, p):
        assert x * F.inv(x) % p == 1


def test_canonical_values():
    assert P7(-1).value == 6
    assert P7(Fraction(1, 2)).value == 4
    assert Q(Fraction(2, 4)).value == Fraction(1, 2)
    assert Q(Fraction(1, -2)).value.denominator == 2


def test_parse_and_format(field):
    x = field.parse("3/4")
    assert field.parse(field.format(x)) == x
    assert field.spec() and parse_field(field.spec()) == field


def test_parse_field_errors():
    with pytest.raises(ValueError):
        parse_field("gf(4)")


def test_int_inverses_and_factorials(field):
    n = 50
    inv = field.int_inverses(n)
    for k in range(1, n + 1):
        assert field.reduce(inv[k] * k) == 1
    fact = field.factorials(n)
    ifact = field.inv_factorials(n)
    assert all(field.reduce(a * b) == 1 for a, b in zip(fact, ifact))


def test_matmul_large_entries():
    F = PrimeField(2013265921)
    rng = np.random.default_rng(0)
    x, y = F.random(rng, (5, 7)), F.random(rng, (7, 3))
    ref = np.array([[sum(int(x[i, k]) * int(y[k, j]) for k in range(7)) % F.modulus
                     for j in range(3)] for i in range(5)])
    assert np.array_equal(F.matmul(x, y), ref)


prime_fields = st.sampled_from([PrimeField(101), PrimeField(2013265921), PrimeField(2**61 - 1)])


@settings(max_examples=1000, deadline=None)
@given(prime_fields, st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(F, a, b, c):
    a, b, c = F(a), F(b), F(c)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a.value:
        assert a * a.inverse() == 1


fractions = st.fractions(max_denominator=10**6).filter(lambda x: abs(x.numerator) < 10**12)


@settings(max_examples=1000, deadline=None)
@given(fractions, fractions, fractions)
def test_rational_axioms(a, b, c):
    a, b, c = Q(a), Q(b), Q(c)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a.value:
        assert a / a == 1
        v = (a * a.inverse()).value
        assert v == 1 and v.denominator > 0


def test_scalars_are_immutable():
    x = P7(3)
    with pytest.raises(Exception):
        x.value = 4
    assert isinstance(x, FieldScalar) and hash(x) == hash(P7(3))
