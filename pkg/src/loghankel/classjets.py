"""Coefficient maps for the classes S*_S and K_S, named test functions and a
grid-based check of the defining real-part inequality.

A function in S*_S satisfies 2 z f'(z) / (f(z) - f(-z)) = (1 + w)/(1 - w) for a
Schwarz function w; a function in K_S satisfies
2 (z f'(z))' / (f(z) - f(-z))' = (1 + w)/(1 - w).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import series as ts
from .logcoeff import TaylorJet, gammas_closed, gammas_series, h22_log
from .series import EXACT, FLOAT, TruncatedSeries


class ClassTag(str, enum.Enum):
    SS = "ss"
    KS = "ks"

    @classmethod
    def parse(cls, value) -> ClassTag:
        if isinstance(value, ClassTag):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown class tag {value!r}; expected 'ss' or 'ks'") from None


@dataclass(frozen=True)
class SchwarzJet:
    """First four coefficients c1..c4 of a Schwarz function."""

    c1: object
    c2: object
    c3: object = 0
    c4: object = 0

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4"):
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))

    def as_tuple(self) -> tuple:
        return (self.c1, self.c2, self.c3, self.c4)


def ss_jet(c: SchwarzJet) -> TaylorJet:
    c1, c2, c3, c4 = c.as_tuple()
    return TaylorJet(
        c1,
        c2 + c1**2,
        (c3 + 3 * c1 * c2 + 2 * c1**3) / 2,
        (c4 + 2 * c2**2 + 5 * c1**2 * c2 + 2 * c1 * c3 + 2 * c1**4) / 2,
    )


def ks_jet(c: SchwarzJet) -> TaylorJet:
    c1, c2, c3, c4 = c.as_tuple()
    return TaylorJet(
        c1 / 2,
        (c2 + c1**2) / 3,
        (c3 + 3 * c1 * c2 + 2 * c1**3) / 8,
        (c4 + 2 * c2**2 + 5 * c1**2 * c2 + 2 * c1 * c3 + 2 * c1**4) / 10,
    )


def h22_ss_c(c: SchwarzJet):
    """H_{2,2}(F_f/2) for f in S*_S as a polynomial in c1..c4."""
    c1, c2, c3, c4 = c.as_tuple()
    return (c1**6 + 30 * c1**4 * c2 - 6 * c1**3 * c3 + 72 * c1**2 * c2**2
            + 18 * c1**2 * c4 + 36 * c2**3 - 18 * c3**2 + 36 * c2 * c4) / 288


def h22_ks_c(c: SchwarzJet):
    """H_{2,2}(F_f/2) for f in K_S as a polynomial in c1..c4."""
    c1, c2, c3, c4 = c.as_tuple()
    return (175 * c1**6 + 2508 * c1**4 * c2 - 180 * c1**3 * c3 - 432 * c1 * c2 * c3
            + 5640 * c1**2 * c2**2 + 1440 * c1**2 * c4 + 3328 * c2**3
            - 1080 * c3**2 + 2304 * c2 * c4) / 276480


JET_MAPS = {ClassTag.SS: ss_jet, ClassTag.KS: ks_jet}
H22_C = {ClassTag.SS: h22_ss_c, ClassTag.KS: h22_ks_c}


def h22_chain(tag: ClassTag, c: SchwarzJet):
    """The a-space route: jet map, then gamma formulas, then gamma2 gamma4 - gamma3^2."""
    return h22_log(gammas_closed(JET_MAPS[ClassTag.parse(tag)](c)))


def subordinate_series(tag: ClassTag, w: TruncatedSeries) -> TruncatedSeries:
    """Solve the defining subordination equation for f given a Schwarz series w.

    Works coefficient by coefficient, independently of the closed jet maps.
    """
    tag = ClassTag.parse(tag)
    if w[0] != 0:
        raise ts.SeriesError("w must vanish at 0")
    n = w.order
    one = ts.ts_from([1], n, w.mode, w.digits)
    p = ts.ts_div(one + w, one - w)
    with mpmath.workdps(w.digits):
        a = [0 * p[0], p[0] / p[0]] + [0 * p[0]] * (n - 1)
        for m in range(2, n + 1):
            if tag is ClassTag.SS:
                # m a_m z^{m-1} = P(z) * sum_{k odd} a_k z^{k-1}
                rhs = sum((p[j] * a[m - j] for j in range(1, m) if (m - j) % 2 == 1), 0 * p[0])
                a[m] = rhs / (m - (m % 2))
            else:
                # m^2 a_m z^{m-1} = P(z) * sum_{k odd} k a_k z^{k-1}
                rhs = sum((p[j] * (m - j) * a[m - j] for j in range(1, m) if (m - j) % 2 == 1), 0 * p[0])
                a[m] = rhs / (m * m - (m if m % 2 else 0))
        return w._like(a)


# ---------------------------------------------------------------------------
# catalog

MEMBERSHIP_ORDER = 1000


def f1_constant(digits: int = ts.DEFAULT_DIGITS):
    """The geometric-series constant of the proposed S*_S extremal function."""
    with mpmath.workdps(digits + 10):
        mpf = mpmath.mpf
        r = mpmath.sqrt(678)
        big_a = (8696056 + 741393 * r
                 + 81 * mpmath.sqrt(11507173440 + 1965308656 * r + 83777409 * r**2))
        inner = (mpf(8) / 27 + 32 * mpf(74) ** (mpf(2) / 3) / (27 * mpmath.cbrt(big_a))
                 + mpmath.cbrt(2) * mpmath.cbrt(big_a) / (27 * mpf(37) ** (mpf(2) / 3)))
        value = mpmath.sqrt(inner)
    with mpmath.workdps(digits):
        return +value, +big_a


def g1_constant(digits: int = ts.DEFAULT_DIGITS):
    """2 (2/5)^(1/3) (13/7)^(1/6), the log constant of the proposed K_S extremal."""
    with mpmath.workdps(digits + 10):
        mpf = mpmath.mpf
        value = 2 * mpmath.cbrt(mpf(2) / 5) * (mpf(13) / 7) ** (mpf(1) / 6)
    with mpmath.workdps(digits):
        return +value


def _koebe(order, digits):
    return ts.ts_from([0] + list(range(1, order + 1)), order)


def _f2(order, digits):
    return ts.ts_from([0] + [1 if k % 2 else 0 for k in range(1, order + 1)], order)


def _g2(order, digits):
    return ts.ts_from([0] + [Fraction(1, k) for k in range(1, order + 1)], order)


def _atanh(order, digits):
    return ts.ts_from([0] + [Fraction(1, k) if k % 2 else 0 for k in range(1, order + 1)], order)


def _f1(order, digits):
    s, _ = f1_constant(digits)
    with mpmath.workdps(digits):
        return ts.ts_from([0] + [s ** (k - 1) for k in range(1, order + 1)], order, FLOAT, digits)


def _g1(order, digits):
    s = g1_constant(digits)
    with mpmath.workdps(digits):
        return ts.ts_from([0] + [s ** (k - 1) / k for k in range(1, order + 1)], order, FLOAT, digits)


_BUILDERS: dict[str, tuple[Callable, ClassTag | None, str]] = {
    "koebe": (_koebe, None, "z/(1-z)^2"),
    "f2": (_f2, ClassTag.SS, "z/(1-z^2)"),
    "g2": (_g2, ClassTag.KS, "-log(1-z)"),
    "atanh": (_atanh, ClassTag.KS, "(1/2) log((1+z)/(1-z)); K_S image of w(z) = z^2"),
    "f1": (_f1, ClassTag.SS, "z/(1 - s z), s from the closed-form radical"),
    "g1": (_g1, ClassTag.KS, "-(1/s) log(1 - s z), s = 2 (2/5)^(1/3) (13/7)^(1/6)"),
}

CATALOG_NAMES = tuple(_BUILDERS)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    series: TruncatedSeries
    class_claim: ClassTag | None
    analyticity_radius_estimate: object
    notes: tuple = ()
    constant: object | None = None
    digits: int = ts.DEFAULT_DIGITS

    def at_order(self, order: int) -> TruncatedSeries:
        return _BUILDERS[self.name][0](order, self.digits)


def catalog(name: str, order: int = ts.DEFAULT_ORDER, digits: int = ts.DEFAULT_DIGITS,
            audit: bool = True) -> CatalogEntry:
    """Named test functions; f1 and g1 additionally carry an audit in ``notes``."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown catalog name {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    builder, claim, formula = _BUILDERS[name]
    f = builder(order, digits)
    notes = [formula]
    constant = None
    radius: object = Fraction(1)
    if name in ("f1", "g1"):
        constant = f1_constant(digits)[0] if name == "f1" else g1_constant(digits)
        with mpmath.workdps(digits):
            radius = 1 / constant
    entry = CatalogEntry(name, f, claim, radius, tuple(notes), constant, digits)
    if audit and name in ("f1", "g1"):
        entry = CatalogEntry(name, f, claim, radius, tuple(notes + extremal_audit(entry)), constant, digits)
    return entry


def extremal_audit(entry: CatalogEntry) -> list[str]:
    """Numeric audit of a proposed extremal function; reports, never asserts."""
    from .bounds import closed_form_bound

    digits = entry.digits
    s = entry.constant
    notes = [f"constant = {mpmath.nstr(s, 20)}",
             f"analyticity radius estimate = {mpmath.nstr(entry.analyticity_radius_estimate, 20)}"]
    if s > 1:
        notes.append("constant exceeds 1: the series has a singularity inside the unit disk")
    f = entry.at_order(8)
    g = gammas_series(f, 4)
    with mpmath.workdps(digits):
        h = g[1] * g[3] - g[2] ** 2
        tag = entry.class_claim
        bound = closed_form_bound(tag, digits).value
        notes.append(f"|H22| from series = {mpmath.nstr(abs(h), 20)}; class bound = {mpmath.nstr(bound, 20)}; "
                     f"equal within 1e-9: {bool(abs(abs(h) - bound) <= mpmath.mpf('1e-9'))}")
        if entry.name == "f1":
            printed = [s**2 / 4, s**3 / 6, s**4 / 8]
        else:
            printed = [mpmath.mpf(5) / 48 * s**2, s**3 / 16, mpmath.mpf(251) / 5760 * s**4]
        ok = all(abs(a - b) <= mpmath.mpf(10) ** (-(digits - 10)) for a, b in zip(g[1:4], printed))
        notes.append(f"printed gamma_2..gamma_4 formulas reproduced: {ok}")
        c1 = s
        notes.append(f"Schwarz coefficient c1 = {mpmath.nstr(c1, 12)} "
                     f"({'violates' if c1 > 1 else 'satisfies'} |c1| <= 1)")
    report = membership_report(entry, tag, order=400)
    notes.append(f"membership on default grid: verdict={report.verdict}, "
                 f"min_re={_fmt(report.min_re)}, warnings={len(report.warnings)}")
    inner_radii = tuple(r for r in GridSpec.default().radii if r < float(entry.analyticity_radius_estimate) * 0.95)
    if inner_radii:
        inner = membership_report(entry, tag, GridSpec(inner_radii, 512), order=400)
        notes.append(f"membership inside 0.95 x analyticity radius (r <= {inner_radii[-1]:.2f}): "
                     f"verdict={inner.verdict}, min_re={_fmt(inner.min_re)}")
    return notes


def _fmt(v) -> str:
    return "nan" if v is None else f"{float(v):.6g}"


# ---------------------------------------------------------------------------
# membership

@dataclass(frozen=True)
class GridSpec:
    radii: tuple
    n_angles: int

    @classmethod
    def default(cls) -> GridSpec:
        return cls(tuple(round(0.04 * k, 2) for k in range(1, 25)), 512)

    def __post_init__(self):
        if not self.radii or any(not 0 < r < 1 for r in self.radii):
            raise ValueError("grid radii must lie strictly inside the unit disk")
        if self.n_angles < 1:
            raise ValueError("n_angles must be positive")

    def points(self) -> np.ndarray:
        theta = 2 * np.pi * np.arange(self.n_angles) / self.n_angles
        return np.asarray(self.radii)[:, None] * np.exp(1j * theta)[None, :]


@dataclass(frozen=True)
class MembershipReport:
    tag: ClassTag
    min_re: float | None
    argmin: complex | None
    grid: GridSpec
    verdict: str
    threshold: float
    order: int
    indeterminate_points: tuple = ()
    warnings: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "class": self.tag.value,
            "min_re": self.min_re,
            "argmin": None if self.argmin is None else [self.argmin.real, self.argmin.imag],
            "grid": {"radii": list(self.grid.radii), "n_angles": self.grid.n_angles},
            "verdict": self.verdict,
            "threshold": self.threshold,
            "order": self.order,
            "indeterminate_points": [[z.real, z.imag] for z in self.indeterminate_points],
            "warnings": list(self.warnings),
        }


def ratio_series(f: TruncatedSeries, tag: ClassTag) -> tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator coefficient arrays of the defining ratio.

    The common factor z is cancelled: for S*_S the ratio 2zf'/(f(z)-f(-z)) is
    f'(z) / sum_{k odd} a_k z^(k-1); for K_S the ratio 2(zf')'/(f(z)-f(-z))' is
    (zf')'(z) / sum_{k odd} k a_k z^(k-1).
    """
    a = ts.to_numpy(f)
    k = np.arange(len(a))
    odd = (k % 2 == 1)
    if tag is ClassTag.SS:
        num = (k * a)[1:]
        den = np.where(odd, a, 0)[1:]
    else:
        num = (k * k * a)[1:]
        den = np.where(odd, k * a, 0)[1:]
    return num, den


def membership_report(target, tag, grid: GridSpec | None = None, order: int | None = None,
                      threshold: float = 1e-9, tail_tolerance: float = 1e-6,
                      polynomial: bool = False) -> MembershipReport:
    """Minimum real part of the defining ratio over a polar grid.

    ``target`` is a :class:`CatalogEntry` (re-expanded to ``order`` terms) or a
    normalized :class:`TruncatedSeries`. With ``polynomial=True`` the series is
    taken as the whole function and no truncation warnings are raised.
    Verdict: ``pass`` when min Re > threshold and the evaluation is reliable,
    ``fail`` when min Re <= threshold, ``indeterminate`` when a denominator
    vanishes on the grid or the truncation tail is too large to trust.
    """
    tag = ClassTag.parse(tag)
    grid = grid or GridSpec.default()
    if isinstance(target, CatalogEntry):
        f = target.at_order(order or MEMBERSHIP_ORDER)
    else:
        f = target
    if f[0] != 0 or f.order < 1 or f[1] != 1:
        raise ts.SeriesError("membership needs a normalized series")
    num, den = ratio_series(f, tag)
    z = grid.points()
    with np.errstate(all="ignore"):
        top = ts.horner_numpy(num, z)
        bot = ts.horner_numpy(den, z)
        bad = ~np.isfinite(top) | ~np.isfinite(bot) | (np.abs(bot) <= 1e-14 * np.maximum(1.0, np.abs(top)))
        ratio = np.where(bad, np.nan, top / np.where(bad, 1, bot))
    warnings = []
    if not polynomial:
        r = max(grid.radii)
        for label, coeffs in (("numerator", num), ("denominator", den)):
            with np.errstate(all="ignore"):
                tail = ts.tail_bound(coeffs, r)
            if not tail <= tail_tolerance:
                warnings.append(f"{label} truncation tail at r={r} is {tail:.3g} > {tail_tolerance:g}")
    re = np.real(ratio)
    indeterminate = tuple(complex(p) for p in z[bad])
    if np.all(bad):
        return MembershipReport(tag, None, None, grid, "indeterminate", threshold, f.order,
                                indeterminate, tuple(warnings))
    idx = np.unravel_index(np.nanargmin(re), re.shape)
    min_re = float(re[idx])
    if indeterminate or warnings:
        verdict = "indeterminate"
    elif min_re > threshold:
        verdict = "pass"
    else:
        verdict = "fail"
    return MembershipReport(tag, min_re, complex(z[idx]), grid, verdict, threshold, f.order,
                            indeterminate, tuple(warnings))
