from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seriesolve import poly
from seriesolve.counter import counting
from seriesolve.errors import CharacteristicTooSmall, IndexOutOfRange, MixedFields, NotInvertible
from seriesolve.field import PrimeField, Rationals
from seriesolve.ntt import get_plan, ntt_available
from seriesolve.series import (
    Series,
    differentiate,
    high,
    integrate,
    low,
    mid,
    mul,
    series_inverse,
    shift,
)

from conftest import P

Q = Rationals()


def S(F, *c):
    return Series(F, list(c))


def test_square_of_one_plus_t(field):
    f = S(field, 1, 1)
    assert mul(f, f, 3) == S(field, 1, 2, 1)


def test_mul_by_one(field, rng):
    f = Series(field, field.random(rng, (20,)))
    assert mul(f, Series.one(field, 20), 12) == low(f, 12)


@pytest.mark.parametrize("F", [P, PrimeField(2**61 - 1), Q], ids=lambda F: F.spec())
def test_algorithms_agree_degree_511(F, rng):
    a, b = F.random(rng, (512,)), F.random(rng, (512,))
    ref = poly.mul(F, a, b, 1023, "naive")
    assert np.array_equal(poly.mul(F, a, b, 1023, "karatsuba"), ref)
    assert np.array_equal(poly.mul(F, a, b, 1023, "ntt"), ref)
    assert np.array_equal(poly.mul(F, a, b, 1023), ref)


def test_ntt_roundtrip_and_availability(rng):
    plan = get_plan(P, 64)
    x = P.random(rng, (3, 64))
    assert np.array_equal(plan.inverse(plan.forward(x)), x)
    assert ntt_available(P, 2**27)
    assert not ntt_available(P, 2**28)
    assert not ntt_available(Q, 8)
    assert not ntt_available(PrimeField(2**61 - 1), 1024)  # 2^61 - 2 has 2-adicity 1


def test_ntt_falls_back_silently():
    F = PrimeField(101)  # 100 = 4 * 25: transforms up to size 4 only
    rng = np.random.default_rng(1)
    a, b = F.random(rng, (40,)), F.random(rng, (40,))
    assert np.array_equal(poly.mul(F, a, b, 79, "ntt"), poly.mul(F, a, b, 79, "naive"))


def test_truncation_examples(field):
    f = S(field, 1, 2, 3, 4)
    assert low(f, 2) == S(field, 1, 2)
    assert high(f, 2) == S(field, 3, 4)
    assert mid(f, 1, 3) == S(field, 2, 3)
    with pytest.raises(IndexOutOfRange):
        low(f, 5)
    with pytest.raises(IndexOutOfRange):
        mid(f, 3, 2)
    with pytest.raises(IndexOutOfRange):
        f[4]


def test_low_high_reconstruct(field, rng):
    f = Series(field, field.random(rng, (9,)))
    for k in range(10):
        assert low(f, k).coeffs.tolist() + shift(high(f, k), k).coeffs[k:].tolist() == f.coeffs.tolist()


def test_integrate_examples():
    assert integrate(S(Q, 1, 1)) == S(Q, 0, 1, Fraction(1, 2))
    assert integrate(Series.zero(Q, 3)) == Series.zero(Q, 4)
    F5 = PrimeField(5)
    with pytest.raises(CharacteristicTooSmall):
        integrate(Series(F5, [1, 1, 1, 1, 1]))


def test_differentiate_examples():
    assert differentiate(S(Q, 0, 1, Fraction(1, 2))) == S(Q, 1, 1)
    assert differentiate(S(Q, 7)) == Series.zero(Q, 0)


def test_differentiate_integrate_roundtrip(field, rng):
    for n in range(1, 60, 7):
        f = Series(field, field.random(rng, (n,)))
        assert differentiate(integrate(f)) == f


def test_inverse_examples(field):
    g = series_inverse(S(field, 1, -1), 10)
    assert g == Series(field, [1] * 10)
    assert series_inverse(S(field, 1), 1) == S(field, 1)
    with pytest.raises(NotInvertible):
        series_inverse(S(field, 0, 1), 4)


def test_inverse_random(field, rng):
    c = field.random(rng, (64,))
    c[0] = field.scalar(3)
    f = Series(field, c)
    assert mul(f, series_inverse(f, 64), 64) == Series.one(field, 64)


def test_mixed_fields_rejected():
    with pytest.raises(MixedFields):
        S(P, 1) + S(Q, 1)


def test_text_roundtrip(field):
    f = S(field, 1, Fraction(1, 2), 0, 5)
    assert Series.from_text(field, f.to_text()) == f


def test_mul_counter_growth():
    # field multiplications of NTT products grow like d log d
    rng = np.random.default_rng(7)
    ks = list(range(10, 15))
    counts = []
    for k in ks:
        d = 2**k
        a, b = P.random(rng, (d,)), P.random(rng, (d,))
        with counting() as c:
            poly.mul(P, a, b, d)
        counts.append(c.field_muls)
    slope = np.polyfit(np.log2([2**k for k in ks]), np.log2(counts), 1)[0]
    assert 1.0 <= slope <= 1.25


series_fields = st.sampled_from([P, PrimeField(101), Q])


@settings(max_examples=60, deadline=None)
@given(series_fields, st.integers(0, 2**32), st.integers(1, 80))
def test_mul_commutative_associative(F, seed, n):
    rng = np.random.default_rng(seed)
    f, g, h = (Series(F, F.random(rng, (n,))) for _ in range(3))
    assert mul(f, g) == mul(g, f)
    assert mul(mul(f, g), h) == mul(f, mul(g, h))


@settings(max_examples=60, deadline=None)
@given(series_fields, st.integers(0, 2**32), st.integers(1, 200), st.integers(1, 200))
def test_algorithms_identical(F, seed, la, lb):
    rng = np.random.default_rng(seed)
    a, b = F.random(rng, (la,)), F.random(rng, (lb,))
    n = la + lb - 1
    ref = poly.mul(F, a, b, n, "naive")
    for alg in ("karatsuba", "ntt"):
        assert np.array_equal(poly.mul(F, a, b, n, alg), ref)
