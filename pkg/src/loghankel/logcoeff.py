"""Logarithmic coefficients and Hankel determinants.

For a normalized f(z) = z + a2 z^2 + ... the logarithmic coefficients are
defined by log(f(z)/z) = 2 * sum(gamma_n z^n).
"""

from __future__ import annotations

from dataclasses import dataclass, astuple
from fractions import Fraction
from typing import Sequence

import mpmath

from .series import SeriesError, TruncatedSeries, ts_log


@dataclass(frozen=True)
class TaylorJet:
    """Coefficients a2..a5 (and optionally a6) of f(z) = z + a2 z^2 + ..."""

    a2: object
    a3: object
    a4: object
    a5: object
    a6: object | None = None

    def __post_init__(self):
        for name in ("a2", "a3", "a4", "a5", "a6"):
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))

    @classmethod
    def from_series(cls, f: TruncatedSeries) -> TaylorJet:
        if f.order < 5:
            raise SeriesError("need order >= 5 to read a2..a5")
        return cls(f[2], f[3], f[4], f[5], f[6] if f.order >= 6 else None)

    def as_tuple(self) -> tuple:
        return astuple(self)


@dataclass(frozen=True)
class LogGammas:
    g1: object
    g2: object
    g3: object
    g4: object
    g5: object | None = None

    def as_list(self) -> list:
        out = [self.g1, self.g2, self.g3, self.g4]
        if self.g5 is not None:
            out.append(self.g5)
        return out


def gammas_closed(jet: TaylorJet) -> LogGammas:
    """Closed formulas for gamma_1..gamma_5 in terms of a2..a6.

    gamma_5 is returned only when ``jet.a6`` is given.
    """
    a2, a3, a4, a5, a6 = jet.a2, jet.a3, jet.a4, jet.a5, jet.a6
    g1 = a2 / 2
    g2 = (a3 - a2**2 / 2) / 2
    g3 = (a4 - a2 * a3 + a2**3 / 3) / 2
    g4 = (a5 - a2 * a4 + a2**2 * a3 - a3**2 / 2 - a2**4 / 4) / 2
    g5 = None
    if a6 is not None:
        g5 = (a6 - a2 * a5 - a3 * a4 + a2 * a3**2 + a2**2 * a4 - a2**3 * a3 + a2**5 / 5) / 2
    return LogGammas(g1, g2, g3, g4, g5)


def gammas_series(f: TruncatedSeries, n_max: int) -> list:
    """gamma_1..gamma_{n_max} read off (1/2) log(f(z)/z)."""
    if f.order < 1 or f[0] != 0 or f[1] != 1:
        raise SeriesError("gammas_series needs a normalized series (a0 = 0, a1 = 1)")
    if f.order < n_max + 1:
        raise SeriesError(f"order {f.order} too small for gamma_{n_max}")
    f_over_z = f._like(f.coeffs[1:])
    log = ts_log(f_over_z)
    with mpmath.workdps(f.digits):
        return [log[n] / 2 for n in range(1, n_max + 1)]


def hankel_det(seq: Sequence, q: int, n: int):
    """Determinant of the q x q Hankel matrix [seq[n+i+j]].

    ``seq`` is indexed directly, so pass a leading placeholder when the
    sequence is 1-based (e.g. ``[None, gamma_1, gamma_2, ...]``).
    Uses fraction-free elimination so exact inputs stay exact.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if n < 0 or n + 2 * (q - 1) >= len(seq):
        raise ValueError(f"sequence of length {len(seq)} too short for H_{{{q},{n}}}")
    m = [[seq[n + i + j] for j in range(q)] for i in range(q)]
    return _bareiss(m)


def _bareiss(m: list) -> object:
    size = len(m)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0 * m[0][0]
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[-1][-1]


def h22_log(g: LogGammas):
    """gamma_2 gamma_4 - gamma_3^2."""
    return g.g2 * g.g4 - g.g3**2


def h22_a_sextic(jet: TaylorJet):
    """288 * H_{2,2}(F_f/2) expanded directly in a2..a5."""
    a2, a3, a4, a5 = jet.a2, jet.a3, jet.a4, jet.a5
    return (a2**6 - 6 * a2**4 * a3 - 12 * a2**3 * a4 + 72 * a2 * a3 * a4
            + 18 * a2**2 * a3**2 - 36 * a2**2 * a5 - 36 * a3**3 - 72 * a4**2
            + 72 * a3 * a5)
