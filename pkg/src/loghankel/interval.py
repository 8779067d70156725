"""Vectorised interval arithmetic with outward rounding.

Each elementary operation is evaluated in IEEE double with round-to-nearest
and the endpoints are then pushed one ulp outward with ``np.nextafter``, so
the result encloses the exact real result. Arrays of intervals let a whole
batch of branch-and-bound cells be processed in one pass.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

_NEG = -np.inf
_POS = np.inf


def _down(a):
    return np.nextafter(a, _NEG)


def _up(a):
    return np.nextafter(a, _POS)


class Interval:
    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None):
        lo = np.asarray(lo, dtype=np.float64)
        hi = lo if hi is None else np.asarray(hi, dtype=np.float64)
        self.lo, self.hi = np.broadcast_arrays(lo, hi)

    @classmethod
    def point(cls, v) -> Interval:
        """Enclosure of a scalar constant (rationals are rounded outward)."""
        if isinstance(v, Interval):
            return v
        if isinstance(v, Rational) and not isinstance(v, int):
            f = float(v)
            if Fraction(f) == v:
                return cls(f, f)
            return cls(_down(f), _up(f))
        if isinstance(v, int) and abs(v) > 2**53:
            f = float(v)
            return cls(_down(f), _up(f))
        return cls(v, v)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def width(self):
        return self.hi - self.lo

    def contains_zero(self):
        return (self.lo <= 0) & (self.hi >= 0)

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = Interval.point(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = Interval.point(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return Interval.point(other) - self

    def __mul__(self, other):
        o = Interval.point(other)
        with np.errstate(invalid="ignore", over="ignore"):
            p = np.stack([self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi])
        # 0 * inf contributes 0, the usual interval convention
        p = np.where(np.isnan(p), 0.0, p)
        return Interval(_down(p.min(axis=0)), _up(p.max(axis=0)))

    __rmul__ = __mul__

    def reciprocal(self):
        if np.any(self.contains_zero()):
            raise ZeroDivisionError("interval reciprocal of an interval containing 0")
        with np.errstate(divide="ignore", over="ignore"):
            return Interval(_down(1.0 / self.hi), _up(1.0 / self.lo))

    def __truediv__(self, other):
        return self * Interval.point(other).reciprocal()

    def __rtruediv__(self, other):
        return Interval.point(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return Interval(np.ones_like(self.lo))
        if n % 2 == 0:
            base = self.abs()
        else:
            base = self
        out = base
        for _ in range(n - 1):
            out = _mul_same_sign(out, base) if n % 2 == 0 else out * base
        return out

    def abs(self):
        lo = np.where(self.lo >= 0, self.lo, np.where(self.hi <= 0, -self.hi, 0.0))
        hi = np.maximum(np.abs(self.lo), np.abs(self.hi))
        return Interval(lo, hi)


def _mul_same_sign(a: Interval, b: Interval) -> Interval:
    # both operands nonnegative, so the product is too
    with np.errstate(over="ignore"):
        return Interval(np.maximum(_down(a.lo * b.lo), 0.0), _up(a.hi * b.hi))
