from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from loghankel.logcoeff import (TaylorJet, gammas_closed, gammas_series, h22_a_sextic, h22_log,
                                hankel_det)
from loghankel.series import SeriesError, ts_from

Z = sp.Symbol("z")
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)


def sympy_gammas(a, n):
    f = Z + sum(sp.Rational(c.numerator, c.denominator) * Z ** (k + 2) for k, c in enumerate(a))
    s = sp.series(sp.log(f / Z) / 2, Z, 0, n + 1).removeO()
    return [Fraction(str(sp.Rational(s.coeff(Z, k)))) for k in range(1, n + 1)]


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=5, max_size=5))
def test_closed_formulas_match_sympy_log_expansion(a):
    g = gammas_closed(TaylorJet(*a))
    assert g.as_list() == sympy_gammas(a, 5)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=5, max_size=5))
def test_series_route_matches_closed_route(a):
    f = ts_from([0, 1, *a], 6)
    assert gammas_series(f, 5) == gammas_closed(TaylorJet(*a)).as_list()


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=4, max_size=4))
def test_sextic_is_288_h22(a):
    jet = TaylorJet(*a)
    assert h22_a_sextic(jet) == 288 * h22_log(gammas_closed(jet))


def test_koebe_gammas():
    koebe = ts_from([0] + list(range(1, 13)), 12)
    assert gammas_series(koebe, 10) == [Fraction(1, n) for n in range(1, 11)]


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=9, max_size=9), st.integers(1, 3), st.integers(0, 2))
def test_hankel_det_matches_sympy(seq, q, n):
    expected = sp.Matrix(q, q, lambda i, j: sp.Rational(str(seq[n + i + j]))).det()
    assert hankel_det(seq, q, n) == Fraction(str(expected))


def test_h22_hankel_uses_one_based_index():
    g = gammas_closed(TaylorJet(1, 2, 3, 4))
    seq = [None, *g.as_list()]
    assert hankel_det(seq, 2, 2) == h22_log(g)


def test_hankel_det_short_sequence():
    with pytest.raises(ValueError):
        hankel_det([1, 2, 3], 2, 2)


def test_gammas_series_validates_input():
    with pytest.raises(SeriesError):
        gammas_series(ts_from([0, 2, 1], 6), 3)
    with pytest.raises(SeriesError):
        gammas_series(ts_from([0, 1, 1], 3), 4)


def test_int_coefficients_become_fractions():
    jet = TaylorJet(1, 2, 3, 4)
    assert all(isinstance(v, Fraction) for v in jet.as_tuple()[:4])
    assert gammas_closed(jet).g1 == Fraction(1, 2)
