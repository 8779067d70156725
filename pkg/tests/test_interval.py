from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loghankel.interval import Interval

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def interval_and_point(draw_a, draw_b, t):
    lo, hi = min(draw_a, draw_b), max(draw_a, draw_b)
    return Interval(np.array([lo]), np.array([hi])), Fraction(lo) + (Fraction(hi) - Fraction(lo)) * t


def contains(iv, exact):
    lo, hi = float(iv.lo[0]), float(iv.hi[0])
    return (lo == -np.inf or Fraction(lo) <= exact) and (hi == np.inf or exact <= Fraction(hi))


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite, st.fractions(0, 1), st.fractions(0, 1))
def test_arithmetic_is_sound(a, b, c, d, s, t):
    x, xv = interval_and_point(a, b, s)
    y, yv = interval_and_point(c, d, t)
    assert contains(x + y, xv + yv)
    assert contains(x - y, xv - yv)
    assert contains(x * y, xv * yv)
    assert contains(x**2, xv**2)
    assert contains(x**3, xv**3)
    if not y.contains_zero()[0]:
        assert contains(x / y, xv / yv)


def test_even_power_of_straddling_interval_is_nonnegative():
    x = Interval(np.array([-2.0]), np.array([1.0]))
    sq = x**2
    assert sq.lo[0] == 0.0 and sq.hi[0] >= 4.0


def test_rational_point_is_rounded_outward():
    iv = Interval.point(Fraction(1, 3))
    assert Fraction(float(iv.lo)) < Fraction(1, 3) < Fraction(float(iv.hi))


def test_reciprocal_of_zero_interval_fails():
    with pytest.raises(ZeroDivisionError):
        Interval(np.array([-1.0]), np.array([1.0])).reciprocal()
