from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from loghankel.series import (FLOAT, GaussianRational, SeriesError, TruncatedSeries, qcomplex,
                              ts_compose, ts_derive, ts_div, ts_eval, ts_exp, ts_from, ts_integrate,
                              ts_inv, ts_log, ts_mul, ts_reflect, ts_z)

Z = sp.Symbol("z")
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=20)


def sympy_coeffs(expr, n):
    poly = sp.series(expr, Z, 0, n + 1).removeO()
    return [Fraction(str(sp.Rational(poly.coeff(Z, k)))) for k in range(n + 1)]


def test_log_matches_sympy():
    f = ts_from([1, 2, Fraction(-1, 3), 5], 8)
    expr = sp.log(1 + 2 * Z - sp.Rational(1, 3) * Z**2 + 5 * Z**3)
    assert list(ts_log(f)) == sympy_coeffs(expr, 8)


def test_exp_matches_sympy():
    g = ts_from([0, 1, Fraction(1, 2)], 7)
    assert list(ts_exp(g)) == sympy_coeffs(sp.exp(Z + Z**2 / 2), 7)


def test_inverse_and_division_match_sympy():
    a = ts_from([1, -1], 9)
    assert list(ts_inv(a)) == [1] * 10
    num = ts_from([0, 1], 9)
    den = ts_from([1, 0, -1], 9)
    assert list(ts_div(num, den)) == sympy_coeffs(Z / (1 - Z**2), 9)


def test_compose_matches_sympy():
    f = ts_from([0, 1, 3, -2], 6)
    g = ts_from([0, Fraction(1, 2), 1], 6)
    expr = (Z / 2 + Z**2) + 3 * (Z / 2 + Z**2) ** 2 - 2 * (Z / 2 + Z**2) ** 3
    assert list(ts_compose(f, g)) == sympy_coeffs(expr, 6)


def test_compose_requires_zero_constant():
    with pytest.raises(SeriesError):
        ts_compose(ts_z(4), ts_from([1, 1], 4))


def test_log_requires_unit_constant():
    with pytest.raises(SeriesError):
        ts_log(ts_from([2, 1], 4))


def test_derive_integrate_roundtrip():
    f = ts_from([0, 3, Fraction(1, 7), -4, 9], 4)
    assert ts_integrate(ts_derive(f)) == f


def test_reflect_flips_odd_coefficients():
    f = ts_from([1, 2, 3, 4], 3)
    assert list(ts_reflect(f)) == [1, -2, 3, -4]


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=5, max_size=5), st.lists(rationals, min_size=5, max_size=5))
def test_log_of_product_is_sum_of_logs(a, b):
    f = ts_from([1] + a[1:], 4)
    g = ts_from([1] + b[1:], 4)
    assert ts_log(ts_mul(f, g)) == ts_log(f) + ts_log(g)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=6, max_size=6))
def test_exp_inverts_log(a):
    f = ts_from([1] + a[1:], 5)
    assert ts_exp(ts_log(f)) == f


def test_gaussian_rational_arithmetic():
    u = GaussianRational(1, 2)
    v = GaussianRational(Fraction(1, 3), -1)
    assert u * v == GaussianRational(Fraction(1, 3) + 2, Fraction(2, 3) - 1)
    assert (u / v) * v == u
    assert u * u.conjugate() == 5
    assert qcomplex(3, 0) == Fraction(3)
    assert GaussianRational(2, 0) == 2


def test_complex_exact_series():
    i = GaussianRational(0, 1)
    f = ts_from([0, 1, i], 6)
    # (z + i z^2)^2 = z^2 + 2i z^3 - z^4
    assert list(ts_mul(f, f))[:5] == [0, 0, 1, 2 * i, -1]


def test_float_mode_requires_precision():
    with pytest.raises(SeriesError):
        TruncatedSeries((1, 2), FLOAT, 20)


def test_float_mode_matches_mpmath():
    f = ts_from([1, Fraction(1, 3)], 10, FLOAT, 60)
    log = ts_log(f)
    with mpmath.workdps(60):
        # log(1 + t/3) = sum (-1)^(k+1) / (k 3^k) t^k
        expected = [mpmath.mpf(0)] + [mpmath.mpf((-1) ** (k + 1)) / (k * 3**k) for k in range(1, 11)]
        assert all(abs(x - y) < mpmath.mpf(10) ** -55 for x, y in zip(log, expected))


def test_mode_mismatch_is_rejected():
    with pytest.raises(SeriesError):
        ts_mul(ts_z(4), ts_z(4, FLOAT))


def test_eval_tail_bound():
    geometric = ts_from([1] * 31, 30)
    value, tail = ts_eval(geometric, 0.5)
    assert abs(complex(value) - 2) <= tail + 1e-15
    _, tail_out = ts_eval(geometric, 1.0)
    assert tail_out == float("inf")
