from fractions import Fraction

import mpmath
from hypothesis import given, settings
from hypothesis import strategies as st

from qpiii.scalars import ExactField, NumericField, RationalField
from qpiii.series import GradedSeries, series_assert_zero, series_mul, series_scale_z

R = RationalField()
K = ExactField(("a", "b"))
a, b = K.gens()


def S(coeffs, order, field=R):
    return GradedSeries(field, {k: Fraction(v) if field is R else v for k, v in coeffs.items()}, order)


def test_difference_of_squares():
    assert series_mul(S({0: 1, 4: 1}, 8), S({0: 1, 4: -1}, 8)).coeffs == {0: 1, 8: -1}


def test_zero_absorbs():
    assert series_mul(S({0: 3, 2: 5}, 8), S({}, 8)).is_zero()


def test_truncation_drops_high_terms():
    f = S({0: 1, 2: 1}, 3)
    assert (f * f).coeffs == {0: 1, 2: 2}


def test_scale_z_on_monomials():
    f = GradedSeries(K, {4: K.one()}, 8)
    assert series_scale_z(f, a)[4] == a**4
    g = GradedSeries(K, {2: K.one()}, 8)
    assert series_scale_z(g, 1 / a)[2] == a**-2
    c = GradedSeries(K, {0: K.one()}, 8)
    assert series_scale_z(c, a * b)[0] == K.one()


def test_assert_zero_reports():
    assert series_assert_zero(S({}, 8)) == []
    one = GradedSeries(K, {0: K.one()}, 4)
    assert series_assert_zero(one - one) == []
    N = NumericField(30)
    with mpmath.workdps(30):
        f = GradedSeries(N, {4: mpmath.mpf("1e-8")}, 8)
        bad = series_assert_zero(f)
    assert [k for k, _ in bad] == [4]
    assert abs(bad[0][1] - mpmath.mpf("1e-8")) < 1e-20


def test_exp_of_log_series():
    # exp(-sum Z^m/m) = 1 - Z through order 5
    f = GradedSeries(R, {4 * m: Fraction(-1, m) for m in range(1, 6)}, 20)
    assert f.exp().coeffs == {0: 1, 4: -1}


coef = st.fractions(min_value=-4, max_value=4, max_denominator=5)
series = st.dictionaries(st.integers(0, 10), coef, max_size=6)


@settings(max_examples=60, deadline=None)
@given(series, series, series, st.integers(0, 10))
def test_ring_axioms(x, y, z, order):
    f, g, h = S(x, order), S(y, order), S(z, order)
    assert ((f + g) + h).coeffs == (f + (g + h)).coeffs
    assert ((f * g) * h).coeffs == (f * (g * h)).coeffs
    assert (f * (g + h)).coeffs == (f * g + f * h).coeffs
    assert (f * g).coeffs == (g * f).coeffs


@settings(max_examples=60, deadline=None)
@given(series, series, st.integers(0, 10))
def test_mul_is_convolution(x, y, order):
    prod = series_mul(S(x, order), S(y, order))
    for k in range(order + 1):
        direct = sum((x.get(i, 0) * y.get(k - i, 0) for i in range(k + 1)), Fraction(0))
        assert prod[k] == direct


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(0, 12), st.integers(-5, 5), max_size=5))
def test_scale_z_roundtrip(x):
    f = GradedSeries(K, {k: K.const(v) for k, v in x.items()}, 12)
    back = series_scale_z(series_scale_z(f, a), 1 / a)
    assert (back - f).is_zero()
