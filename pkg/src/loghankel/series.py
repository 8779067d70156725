"""Truncated formal power series over exact rationals or mpmath floats.

Two scalar modes are supported:

* ``"exact"``: coefficients are :class:`fractions.Fraction` or
  :class:`GaussianRational` (exact complex rationals).
* ``"float"``: coefficients are mpmath ``mpf``/``mpc`` values carried at a
  declared decimal precision (at least 50 digits).

Every operation is a pure function returning a new :class:`TruncatedSeries`.
Binary operations truncate to the smaller of the two operand orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import mpmath
import numpy as np

EXACT = "exact"
FLOAT = "float"
DEFAULT_ORDER = 12
DEFAULT_DIGITS = 60
MIN_DIGITS = 50


class SeriesError(ValueError):
    """Raised on mode mismatches and violated series preconditions."""


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts.

    Arithmetic results with a zero imaginary part collapse to ``Fraction`` so
    that real values compare equal to plain rationals.
    """

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, Rational):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) + other if isinstance(other, (float, complex)) else NotImplemented
        return qcomplex(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) - other if isinstance(other, (float, complex)) else NotImplemented
        return qcomplex(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return other - complex(self) if isinstance(other, (float, complex)) else NotImplemented
        return qcomplex(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) * other if isinstance(other, (float, complex)) else NotImplemented
        a, b = p
        return qcomplex(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) / other if isinstance(other, (float, complex)) else NotImplemented
        a, b = p
        den = a * a + b * b
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return qcomplex((self.re * a + self.im * b) / den, (self.im * a - self.re * b) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return other / complex(self) if isinstance(other, (float, complex)) else NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        out: Fraction | GaussianRational = Fraction(1)
        base: Fraction | GaussianRational = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return mpmath.sqrt(mpmath.mpf(self.abs2().numerator) / self.abs2().denominator)

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def qcomplex(re, im=0):
    """Exact complex rational; returns a ``Fraction`` when ``im`` is zero."""
    re, im = Fraction(re), Fraction(im)
    if im == 0:
        return re
    return GaussianRational(re, im)


def is_exact(v) -> bool:
    return isinstance(v, (Rational, GaussianRational))


def to_exact(v):
    """Coerce ints, Fractions, rational strings and Gaussian rationals."""
    if isinstance(v, GaussianRational):
        return qcomplex(v.re, v.im)
    if isinstance(v, bool):
        raise SeriesError(f"not an exact scalar: {v!r}")
    if isinstance(v, Rational):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise SeriesError(f"not an exact scalar: {v!r}")


def to_mp(v, digits: int = DEFAULT_DIGITS):
    """Convert a scalar to an mpmath number at ``digits`` precision."""
    with mpmath.workdps(digits):
        if isinstance(v, GaussianRational):
            return mpmath.mpc(to_mp(v.re, digits), to_mp(v.im, digits))
        if isinstance(v, Rational):
            return mpmath.mpf(v.numerator) / v.denominator
        if isinstance(v, complex):
            return mpmath.mpc(v)
        if isinstance(v, (mpmath.mpf, mpmath.mpc)):
            return +v
        return mpmath.mpmathify(v)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients a_0..a_N of a power series, truncated at degree N."""

    coeffs: tuple
    mode: str = EXACT
    digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise SeriesError(f"unknown scalar mode {self.mode!r}")
        if not self.coeffs:
            raise SeriesError("a truncated series needs at least one coefficient")
        if self.mode == FLOAT:
            if self.digits < MIN_DIGITS:
                raise SeriesError(f"float mode requires >= {MIN_DIGITS} digits, got {self.digits}")
            coeffs = tuple(to_mp(c, self.digits) for c in self.coeffs)
        else:
            coeffs = tuple(to_exact(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> TruncatedSeries:
        return self._like(self.coeffs[: order + 1])

    def to_float(self, digits: int | None = None) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs, FLOAT, digits or self.digits)

    def _like(self, coeffs: Iterable) -> TruncatedSeries:
        return TruncatedSeries(tuple(coeffs), self.mode, self.digits)

    def __add__(self, other):
        return ts_add(self, _lift(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return ts_add(self, ts_scale(_lift(other, self), -1))

    def __rsub__(self, other):
        return ts_add(_lift(other, self), ts_scale(self, -1))

    def __neg__(self):
        return ts_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return ts_mul(self, other)
        return ts_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return ts_div(self, other)
        return ts_scale(self, 1 / _scalar_for(self, other))


def _lift(v, like: TruncatedSeries) -> TruncatedSeries:
    if isinstance(v, TruncatedSeries):
        return v
    return like._like([v] + [0] * like.order)


def _scalar_for(s: TruncatedSeries, v):
    return to_mp(v, s.digits) if s.mode == FLOAT else to_exact(v)


def _check_modes(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.mode != b.mode:
        raise SeriesError(f"scalar mode mismatch: {a.mode} vs {b.mode}")


def ts_from(coeffs: Sequence, order: int | None = None, mode: str = EXACT,
            digits: int = DEFAULT_DIGITS) -> TruncatedSeries:
    """Build a series from leading coefficients, zero-padded to ``order``."""
    coeffs = list(coeffs)
    if order is None:
        order = len(coeffs) - 1
    coeffs = (coeffs + [0] * (order + 1 - len(coeffs)))[: order + 1]
    return TruncatedSeries(tuple(coeffs), mode, digits)


def ts_z(order: int = DEFAULT_ORDER, mode: str = EXACT, digits: int = DEFAULT_DIGITS) -> TruncatedSeries:
    """The identity series z."""
    return ts_from([0, 1], order, mode, digits)


def ts_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_modes(a, b)
    n = min(a.order, b.order)
    with mpmath.workdps(max(a.digits, b.digits)):
        return a._like(a[k] + b[k] for k in range(n + 1))


def ts_scale(a: TruncatedSeries, s) -> TruncatedSeries:
    s = _scalar_for(a, s)
    with mpmath.workdps(a.digits):
        return a._like(s * c for c in a.coeffs)


def ts_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller order."""
    _check_modes(a, b)
    n = min(a.order, b.order)
    with mpmath.workdps(max(a.digits, b.digits)):
        out = []
        for k in range(n + 1):
            acc = 0
            for i in range(k + 1):
                if a[i] != 0 and b[k - i] != 0:
                    acc = acc + a[i] * b[k - i]
            out.append(acc)
        return a._like(out)


def ts_inv(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the constant term must be nonzero."""
    if a[0] == 0:
        raise SeriesError("series inverse needs a nonzero constant term")
    with mpmath.workdps(a.digits):
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, a.order + 1):
            acc = 0
            for i in range(1, k + 1):
                if a[i] != 0:
                    acc = acc + a[i] * out[k - i]
            out.append(-acc * inv0)
        return a._like(out)


def ts_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_modes(a, b)
    return ts_mul(a, ts_inv(b))


def ts_derive(f: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative; the order drops by one."""
    if f.order < 1:
        raise SeriesError("derivative needs order >= 1")
    with mpmath.workdps(f.digits):
        return f._like(k * f[k] for k in range(1, f.order + 1))


def ts_integrate(f: TruncatedSeries, constant=0) -> TruncatedSeries:
    """Termwise antiderivative; the order rises by one."""
    with mpmath.workdps(f.digits):
        c = _scalar_for(f, constant)
        return f._like([c] + [f[k] / _scalar_for(f, k + 1) for k in range(f.order + 1)])


def ts_log(f: TruncatedSeries) -> TruncatedSeries:
    """Logarithm of a series with constant term 1, from L' f = f'."""
    if f[0] != 1:
        raise SeriesError("ts_log requires constant term 1")
    n = f.order
    with mpmath.workdps(f.digits):
        lc = [_scalar_for(f, 0)] * (n + 1)
        for k in range(1, n + 1):
            acc = k * f[k]
            for j in range(1, k):
                if f[k - j] != 0:
                    acc = acc - j * lc[j] * f[k - j]
            lc[k] = acc / _scalar_for(f, k)
        return f._like(lc)


def ts_exp(g: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with zero constant term, from E' = g' E."""
    if g[0] != 0:
        raise SeriesError("ts_exp requires constant term 0")
    n = g.order
    with mpmath.workdps(g.digits):
        e = [_scalar_for(g, 1)] + [_scalar_for(g, 0)] * n
        for k in range(1, n + 1):
            acc = 0
            for j in range(1, k + 1):
                if g[j] != 0:
                    acc = acc + j * g[j] * e[k - j]
            e[k] = acc / _scalar_for(g, k)
        return g._like(e)


def ts_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(z)) truncated to the smaller order; needs g(0) = 0."""
    _check_modes(f, g)
    if g[0] != 0:
        raise SeriesError("ts_compose requires g(0) = 0")
    n = min(f.order, g.order)
    g = g.truncate(n)
    out = ts_from([f[n]], n, f.mode, f.digits)
    for k in range(n - 1, -1, -1):
        out = ts_mul(out, g) + ts_from([f[k]], n, f.mode, f.digits)
    return out


def ts_reflect(f: TruncatedSeries) -> TruncatedSeries:
    """f(-z)."""
    return f._like(c if k % 2 == 0 else -c for k, c in enumerate(f.coeffs))


def ts_eval(f: TruncatedSeries, z) -> tuple:
    """Horner evaluation of the truncation at ``z``.

    Returns ``(value, tail)`` where ``tail = max|a_k| |z|^(N+1) / (1 - |z|)``
    is a crude estimate of the neglected tail (``inf`` when ``|z| >= 1``).
    """
    with mpmath.workdps(f.digits):
        acc = 0
        for c in reversed(f.coeffs):
            acc = acc * z + c
        r = abs(complex(z)) if not isinstance(z, (mpmath.mpf, mpmath.mpc)) else float(abs(z))
        big = max(float(abs(_as_complex(c))) for c in f.coeffs)
        tail = big * r ** (f.order + 1) / (1 - r) if r < 1 else float("inf")
        return acc, tail


def _as_complex(c) -> complex:
    if isinstance(c, GaussianRational):
        return complex(c)
    if isinstance(c, (mpmath.mpf, mpmath.mpc)):
        return complex(c)
    return complex(float(c))


def to_numpy(f: TruncatedSeries) -> np.ndarray:
    """Coefficients as a complex128 array (lossy)."""
    return np.array([_as_complex(c) for c in f.coeffs], dtype=np.complex128)


def horner_numpy(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Vectorised Horner evaluation of complex coefficients on a point array."""
    acc = np.zeros_like(z, dtype=np.complex128)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def tail_bound(coeffs: np.ndarray, r: float) -> float:
    """max|a_k| r^(N+1)/(1-r) for a coefficient array of order N."""
    if r >= 1:
        return float("inf")
    n = len(coeffs) - 1
    return float(np.max(np.abs(coeffs))) * r ** (n + 1) / (1 - r)
