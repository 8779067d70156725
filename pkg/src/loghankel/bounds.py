"""Bound surfaces over the region Omega = {0 <= x <= 1, 0 <= y <= 1 - x^2}.

With x = |c1| and y = |c2|, the triangle inequality and the Schwarz
coefficient inequalities give

    288    |H22| <= M(x, y)   for S*_S,
    276480 |H22| <= N(x, y)   for K_S.

This module evaluates M and N (exactly on rationals), differentiates them
symbolically, restricts them to the three edges of Omega and certifies their
global maxima: edge maxima by exact root isolation, and the absence of a
larger interior value by interval branch and bound.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np
import sympy as sp

from . import rootiso
from .classjets import ClassTag
from .interval import Interval
from .series import DEFAULT_DIGITS

NORMALIZER = {ClassTag.SS: 288, ClassTag.KS: 276480}
EDGES = ("y=0", "x=0", "y=1-x^2")


def surface_m(x, y):
    u = 1 - x**2 - y**2 / (1 + x)
    v = 1 - x**2 - y**2
    return (x**6 + 30 * x**4 * y + 6 * x**3 * u + 72 * x**2 * y**2 + 18 * x**2 * v
            + 36 * y**3 + 18 * u**2 + 36 * y * v)


def surface_n(x, y):
    u = 1 - x**2 - y**2 / (1 + x)
    v = 1 - x**2 - y**2
    return (175 * x**6 + 2508 * x**4 * y + 180 * x**3 * u + 5640 * x**2 * y**2
            + 432 * x * y * u + 1440 * x**2 * v + 3328 * y**3 + 2304 * y * v
            + 1080 * u**2)


SURFACES = {ClassTag.SS: surface_m, ClassTag.KS: surface_n}


# Partial derivatives exactly as displayed alongside the surfaces; kept only
# as an audit target, never used for certification.

def printed_m_dx(x, y):
    return (6 * x**5 - 30 * x**4 + 18 * x**2 - 36 * x + 120 * x**3 * y + 108 * x * y**2
            + 18 * x * y**2 * (4 - x) / (1 + x) + 6 * y**2 * (6 - 6 * x**2 + x**3) / (1 + x) ** 2
            - 36 * y**4 / (1 + x) ** 3)


def printed_m_dy(x, y):
    return (30 * x**4 - 36 * x**2 + 108 * x**2 * y + 36 + 12 * y * (6 * x**2 - x**3 - 6) / (1 + x)
            + 72 * y**3 / (1 + x) ** 2)


def printed_n_dx(x, y):
    return (1050 * x**5 - 900 * x**4 - 1440 * x**3 + 540 * x**2 - 1440 * x - 1296 * x**2 * y
            + 10032 * x**3 * y + 8400 * x * y**2 - 4608 * x * y + 432 * y
            + 108 * y**2 * (40 * x - 5 * x**2 - 4 * y) / (1 + x)
            + 36 * y**2 * (5 * x**3 + 12 * x * y - 60 * x**2 + 60) / (1 + x) ** 2
            - 2160 * y**4 / (1 + x) ** 3)


def printed_n_dy(x, y):
    return (2508 * x**4 - 432 * x**3 - 2304 * x**2 + 432 * x + 2304 + 3072 * y**2 + 8400 * x**2 * y
            + 72 * y * (60 * x**2 - 18 * x * y - 5 * x**3 - 60) / (1 + x)
            + 4320 * y**3 / (1 + x) ** 2)


PRINTED_GRADIENTS = {
    ClassTag.SS: (printed_m_dx, printed_m_dy),
    ClassTag.KS: (printed_n_dx, printed_n_dy),
}

# Edge polynomials as printed, ascending coefficients.
PRINTED_BOUNDARY = {
    (ClassTag.SS, "y=0"): (18, 0, -18, 6, 0, -6, 1),
    (ClassTag.SS, "x=0"): (18, 36, -36, 0, 18),
    (ClassTag.SS, "y=1-x^2"): (36, 0, 18, 0, -90, 0, 37),
    (ClassTag.KS, "y=0"): (1080, 0, -720, 180, -360, -180, 175),
    (ClassTag.KS, "x=0"): (1080, 2304, -2160, 1024, 1080),
    (ClassTag.KS, "y=1-x^2"): (3328, 0, -528, 0, -4800, 0, 2175),
}


# ---------------------------------------------------------------------------
# points and evaluation

@dataclass(frozen=True)
class RegionPoint:
    x: object
    y: object

    def __post_init__(self):
        x, y = self.x, self.y
        tol = 0 if isinstance(x, Rational) and isinstance(y, Rational) else 1e-12
        if not (-tol <= x <= 1 + tol and -tol <= y <= 1 - x * x + tol):
            raise ValueError(f"point ({x}, {y}) is outside Omega")

    def on_boundary(self) -> bool:
        return self.x == 0 or self.y == 0 or self.y == 1 - self.x * self.x

    def as_tuple(self) -> tuple:
        return (self.x, self.y)


def _point(p) -> RegionPoint:
    return p if isinstance(p, RegionPoint) else RegionPoint(*p)


def surface_eval(tag, p):
    """M or N at a point of Omega; exact for rational coordinates."""
    p = _point(p)
    return SURFACES[ClassTag.parse(tag)](p.x, p.y)


# ---------------------------------------------------------------------------
# symbolic machinery

_X, _Y = sp.symbols("x y")


@functools.lru_cache(maxsize=None)
def surface_expr(tag: ClassTag) -> sp.Expr:
    return SURFACES[ClassTag.parse(tag)](_X, _Y)


@functools.lru_cache(maxsize=None)
def gradient_exprs(tag: ClassTag) -> tuple:
    expr = surface_expr(tag)
    return sp.diff(expr, _X), sp.diff(expr, _Y)


def _evaluate(expr: sp.Expr, env: dict):
    """Evaluate a sympy expression tree with arbitrary numeric objects."""
    if expr.is_Symbol:
        return env[expr]
    if expr.is_Integer:
        return int(expr)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if expr.is_Add:
        out = 0
        for arg in expr.args:
            out = out + _evaluate(arg, env)
        return out
    if expr.is_Mul:
        out = 1
        for arg in expr.args:
            out = _evaluate(arg, env) * out
        return out
    if expr.is_Pow and expr.exp.is_Integer:
        n = int(expr.exp)
        base = _evaluate(expr.base, env)
        return base**n if n >= 0 else 1 / base ** (-n)
    raise TypeError(f"unsupported expression node {expr.func.__name__}")


def analytic_gradient(tag, x, y) -> tuple:
    """Symbolic partial derivatives evaluated on any numeric type (incl. intervals)."""
    dx, dy = gradient_exprs(ClassTag.parse(tag))
    env = {_X: x, _Y: y}
    return _evaluate(dx, env), _evaluate(dy, env)


def surface_grad(tag, p, source: str = "analytic", require_interior: bool = False):
    """Gradient of M or N.

    ``source`` is ``"analytic"`` (symbolic differentiation, authoritative),
    ``"printed"`` (the displayed formulas) or ``"both"`` (a dict of the two).
    The surfaces are rational functions smooth on a neighbourhood of Omega, so
    boundary points are accepted unless ``require_interior`` is set.
    """
    tag = ClassTag.parse(tag)
    p = _point(p)
    if require_interior and (p.x <= 0 or p.x >= 1 or p.y <= 0 or p.y >= 1 - p.x**2):
        raise ValueError(f"({p.x}, {p.y}) is not an interior point of Omega")
    if source == "analytic":
        return analytic_gradient(tag, p.x, p.y)
    if source == "printed":
        gx, gy = PRINTED_GRADIENTS[tag]
        return gx(p.x, p.y), gy(p.x, p.y)
    if source == "both":
        return {"analytic": surface_grad(tag, p, "analytic"), "printed": surface_grad(tag, p, "printed")}
    raise ValueError(f"unknown gradient source {source!r}")


def gradient_audit(tag, n_points: int = 100, seed: int = 0, rtol: float = 1e-9) -> dict:
    """Compare the printed partials with symbolic differentiation.

    Reports, per partial, the simplified difference (analytic - printed), the
    individual terms of its numerator over the common denominator, and a
    numeric comparison at random interior points.
    """
    tag = ClassTag.parse(tag)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.01, 0.99, n_points)
    ys = rng.uniform(0.01, 0.99, n_points) * (1 - xs**2)
    out = {"class": tag.value, "n_points": n_points, "seed": seed, "partials": {}}
    for var, analytic, printed in zip(("x", "y"), gradient_exprs(tag), PRINTED_GRADIENTS[tag]):
        diff = sp.factor(sp.cancel(sp.together(analytic - printed(_X, _Y))))
        num, den = sp.fraction(sp.together(diff))
        terms = [str(t) for t in sp.Add.make_args(sp.expand(num))] if diff != 0 else []
        a_vals = np.array([float(v) for v in (_evaluate(analytic, {_X: x, _Y: y}) for x, y in zip(xs, ys))])
        p_vals = printed(xs, ys)
        abs_diff = np.abs(a_vals - p_vals)
        disagree = abs_diff > rtol * np.maximum(1.0, np.abs(a_vals))
        out["partials"][var] = {
            "matches": diff == 0,
            "difference": str(diff),
            "discrepant_terms": terms,
            "denominator": str(den),
            "max_abs_diff": float(abs_diff.max()),
            "points_disagreeing": int(disagree.sum()),
        }
    return out


# ---------------------------------------------------------------------------
# edges

@dataclass(frozen=True)
class BoundaryPoly:
    edge: str
    coeffs: tuple
    printed: tuple
    matches_printed: bool

    def __call__(self, t):
        return rootiso.peval(self.coeffs, t)

    def point(self, t) -> tuple:
        return edge_point(self.edge, t)

    def pretty(self, var: str | None = None) -> str:
        return poly_str(self.coeffs, var or ("y" if self.edge == "x=0" else "x"))


def edge_point(edge: str, t) -> tuple:
    if edge == "y=0":
        return (t, 0 * t)
    if edge == "x=0":
        return (0 * t, t)
    if edge == "y=1-x^2":
        return (t, 1 - t * t)
    raise ValueError(f"unknown edge {edge!r}")


def poly_str(coeffs, var: str = "x") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[k])
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + var + ("" if k == 1 else f"^{k}")
        parts.append(("-" if c < 0 else "+") + body)
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[1:] if s.startswith("+") else s


@functools.lru_cache(maxsize=None)
def boundary_restrictions(tag) -> dict:
    """The surface restricted to each edge of Omega, by symbolic substitution."""
    tag = ClassTag.parse(tag)
    expr = surface_expr(tag)
    t = sp.Symbol("t")
    out = {}
    for edge in EDGES:
        px, py = edge_point(edge, t)
        restricted = sp.cancel(sp.together(expr.subs({_X: px, _Y: py}, simultaneous=True)))
        num, den = sp.fraction(restricted)
        poly_num = sp.Poly(num, t)
        poly_den = sp.Poly(den, t)
        q, r = sp.div(poly_num, poly_den)
        if not r.is_zero:
            raise ArithmeticError(f"restriction to {edge} is not a polynomial")
        coeffs = rootiso.poly([Fraction(int(c.p), int(c.q)) for c in reversed(q.all_coeffs())])
        printed = rootiso.poly(PRINTED_BOUNDARY[(tag, edge)])
        out[edge] = BoundaryPoly(edge, coeffs, printed, coeffs == printed)
    return out


# ---------------------------------------------------------------------------
# closed forms

@dataclass(frozen=True)
class ClosedFormBound:
    tag: ClassTag
    value: object
    expression: str
    surface_max: object
    surface_max_expression: str
    normalizer: int


def closed_form_bound(tag, digits: int = DEFAULT_DIGITS) -> ClosedFormBound:
    """The stated H22 bound and the surface maximum it comes from."""
    tag = ClassTag.parse(tag)
    if tag is ClassTag.KS:
        return ClosedFormBound(tag, Fraction(13, 1080), "13/1080", Fraction(3328), "3328", 276480)
    with mpmath.workdps(digits):
        r = mpmath.sqrt(678)
        value = (1272 + 113 * r) / 32856
        smax = 12 * (1272 + 113 * r) / 1369
    return ClosedFormBound(tag, value, "(1272+113*sqrt(678))/32856", smax,
                           "12*(1272+113*sqrt(678))/1369", 288)


def ss_argmax_x2(digits: int = DEFAULT_DIGITS):
    """(30 - sqrt(678))/37, the squared abscissa of the S*_S maximiser."""
    with mpmath.workdps(digits):
        return (30 - mpmath.sqrt(678)) / 37


# ---------------------------------------------------------------------------
# maximisation

@dataclass
class BoundReport:
    tag: ClassTag
    method: str
    max_value: object
    argmax: RegionPoint
    segment: str
    certified: bool
    exact: bool
    enclosure: tuple | None = None
    attaining_edges: tuple = ()
    certificate: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def normalizer(self) -> int:
        return NORMALIZER[self.tag]

    @property
    def h_bound(self):
        if isinstance(self.max_value, Fraction):
            return self.max_value / self.normalizer
        return self.max_value / self.normalizer

    def to_dict(self) -> dict:
        return {
            "class": self.tag.value,
            "surface": "M" if self.tag is ClassTag.SS else "N",
            "method": self.method,
            "max_value": self.max_value,
            "argmax": {"x": self.argmax.x, "y": self.argmax.y},
            "segment": self.segment,
            "attaining_edges": list(self.attaining_edges),
            "certified": self.certified,
            "exact": self.exact,
            "enclosure": list(self.enclosure) if self.enclosure else None,
            "normalizer": self.normalizer,
            "h_bound": self.h_bound,
            "certificate": self.certificate,
            "elapsed_seconds": self.elapsed,
        }


@dataclass(frozen=True)
class EdgeCandidate:
    edge: str
    t_lo: Fraction
    t_hi: Fraction
    lower: Fraction
    upper: Fraction
    t_star: object
    value: object
    exact: bool


def _edge_candidates(bp: BoundaryPoly, digits: int, width: Fraction) -> list[EdgeCandidate]:
    p = bp.coeffs
    dp = rootiso.pderiv(p)
    out = []
    for t in (Fraction(0), Fraction(1)):
        v = rootiso.peval(p, t)
        out.append(EdgeCandidate(bp.edge, t, t, v, v, t, v, True))
    if rootiso.degree(dp) < 1:
        return out
    for lo, hi in rootiso.isolate_roots(dp, 0, 1):
        if lo == hi:
            if lo in (0, 1):
                continue
            v = rootiso.peval(p, lo)
            out.append(EdgeCandidate(bp.edge, lo, hi, v, v, lo, v, True))
            continue
        lo, hi = rootiso.refine_root(dp, lo, hi, width)
        enc_lo, enc_hi = rootiso.interval_eval(p, lo, hi)
        lower = max(rootiso.peval(p, lo), rootiso.peval(p, hi))
        with mpmath.workdps(digits + 10):
            f = lambda s: rootiso.peval(dp, s)
            a = mpmath.mpf(lo.numerator) / lo.denominator
            b = mpmath.mpf(hi.numerator) / hi.denominator
            t_star = mpmath.findroot(f, (a, b), solver="illinois") if lo != hi else a
            if not a <= t_star <= b:
                t_star = (a + b) / 2
            value = rootiso.peval(p, t_star)
        with mpmath.workdps(digits):
            out.append(EdgeCandidate(bp.edge, lo, hi, lower, enc_hi, +t_star, +value, False))
    return out


def _mpkey(v):
    if isinstance(v, Rational):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _interval_cells_pass(surface, gradient, x0, x1, y0, y1, threshold: float):
    """Classify a batch of cells; returns (by_value, by_gradient) boolean masks."""
    xi = Interval(x0, x1)
    yi = Interval(y0, y1)
    upper = surface(xi, yi).hi
    by_value = upper <= threshold
    gx, gy = gradient(xi, yi)
    by_grad = ~gx.contains_zero() | ~gy.contains_zero()
    return by_value, by_grad & ~by_value


def interior_exclusion(tag, threshold, initial: int = 64, cell_budget: int = 10**6,
                       max_depth: int = 30, surface=None, gradient=None) -> dict:
    """Branch and bound over Omega showing no interior point beats ``threshold``.

    A cell is discharged when the interval upper bound of the surface on it is
    at most ``threshold`` (a certified lower bound of the edge maximum), or
    when the interval enclosure of one partial derivative excludes 0, so the
    cell holds no critical point. If every cell is discharged, the maximum over
    Omega is attained on its boundary.

    ``surface`` and ``gradient`` override the class surface; both must accept
    :class:`Interval` arguments (``gradient`` returns a pair of intervals).
    """
    if surface is None:
        tag = ClassTag.parse(tag)
        surface = SURFACES[tag]
        gradient = functools.partial(analytic_gradient, tag)
    elif gradient is None:
        raise ValueError("a custom surface needs a matching gradient")
    threshold = float(Fraction(threshold)) if isinstance(threshold, Rational) else float(threshold)
    # rounding the threshold down keeps the test conservative
    threshold = float(np.nextafter(threshold, -np.inf))
    h = 1.0 / initial
    ii, jj = np.meshgrid(np.arange(initial), np.arange(initial), indexing="ij")
    x0 = (ii * h).ravel()
    y0 = (jj * h).ravel()
    size = np.full(x0.shape, h)
    processed = 0
    by_value_total = 0
    by_grad_total = 0
    depth = 0
    outside_total = 0
    while x0.size:
        # clip to Omega: y <= 1 - x0^2, rounded up
        cap = np.nextafter(1.0 - x0 * x0, np.inf)
        inside = y0 <= cap
        outside_total += int((~inside).sum())
        x0, y0, size, cap = x0[inside], y0[inside], size[inside], cap[inside]
        if not x0.size:
            break
        if processed + x0.size > cell_budget or depth > max_depth:
            return {
                "certified": False,
                "reason": "cell budget exhausted" if depth <= max_depth else "maximum depth reached",
                "cells_processed": processed,
                "cells_pending": int(x0.size),
                "depth": depth,
            }
        processed += x0.size
        y1 = np.minimum(y0 + size, cap)
        by_value, by_grad = _interval_cells_pass(surface, gradient, x0, x0 + size, y0, y1, threshold)
        by_value_total += int(by_value.sum())
        by_grad_total += int(by_grad.sum())
        keep = ~(by_value | by_grad)
        x0, y0, size = x0[keep], y0[keep], size[keep] / 2
        x0 = np.concatenate([x0, x0 + size, x0, x0 + size])
        y0 = np.concatenate([y0, y0, y0 + size, y0 + size])
        size = np.tile(size, 4)
        depth += 1
    return {
        "certified": True,
        "threshold": threshold,
        "initial_grid": [initial, initial],
        "cells_processed": processed,
        "discharged_by_value": by_value_total,
        "discharged_by_gradient": by_grad_total,
        "discarded_outside": outside_total,
        "depth": depth,
        "cell_budget": cell_budget,
    }


def maximize_surface(tag, method: str = "certified", digits: int = DEFAULT_DIGITS,
                     cell_budget: int = 10**6, grid_size: int = 2000) -> BoundReport:
    """Global maximum of M (S*_S) or N (K_S) over Omega."""
    tag = ClassTag.parse(tag)
    if method == "certified":
        return _maximize_certified(tag, digits, cell_budget)
    if method == "grid":
        return _maximize_grid(tag, grid_size)
    raise ValueError(f"unknown method {method!r}")


def _maximize_certified(tag: ClassTag, digits: int, cell_budget: int) -> BoundReport:
    start = time.perf_counter()
    width = Fraction(1, 10**12)
    candidates = []
    edge_records = {}
    for edge, bp in boundary_restrictions(tag).items():
        cands = _edge_candidates(bp, digits, width)
        candidates.extend(cands)
        best = max(cands, key=lambda c: _mpkey(c.value))
        edge_records[edge] = {
            "polynomial": bp.pretty(),
            "matches_printed": bp.matches_printed,
            "critical_intervals": [[c.t_lo, c.t_hi] for c in cands if c.t_lo not in (0, 1) or c.t_lo != c.t_hi],
            "max_value": best.value,
            "argmax_t": best.t_star,
        }
    best = max(candidates, key=lambda c: _mpkey(c.value))
    lower = max(c.lower for c in candidates)
    upper = max(c.upper for c in candidates)
    exact = best.exact and best.value >= upper
    attaining = sorted({c.edge for c in candidates if c.exact == best.exact and c.value == best.value}
                       if exact else {best.edge})
    interior = interior_exclusion(tag, lower, cell_budget=cell_budget)
    with mpmath.workdps(digits):
        px, py = edge_point(best.edge, best.t_star)
        argmax = RegionPoint(px, py)
    certificate = {
        "boundary": {"edges": edge_records, "root_width": width, "lower": lower, "upper": upper},
        "interior": interior,
    }
    return BoundReport(
        tag=tag,
        method="certified",
        max_value=best.value,
        argmax=argmax,
        segment=best.edge,
        certified=bool(interior["certified"]),
        exact=exact,
        enclosure=(lower, upper),
        attaining_edges=tuple(attaining),
        certificate=certificate,
        elapsed=time.perf_counter() - start,
    )


def omega_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Points of an n x n grid on [0,1]^2 that lie in Omega, plus n parabola points."""
    xs = np.linspace(0.0, 1.0, n)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    mask = gy <= 1 - gx**2
    return (np.concatenate([gx[mask], xs]), np.concatenate([gy[mask], 1 - xs**2]))


def _maximize_grid(tag: ClassTag, n: int) -> BoundReport:
    start = time.perf_counter()
    x, y = omega_grid(n)
    vals = SURFACES[tag](x, y)
    k = int(np.argmax(vals))
    px, py = float(x[k]), float(y[k])
    if px == 0:
        seg = "x=0"
    elif py == 0:
        seg = "y=0"
    elif abs(py - (1 - px * px)) <= 1e-15:
        seg = "y=1-x^2"
    else:
        seg = "interior"
    return BoundReport(tag, "grid", float(vals[k]), RegionPoint(px, min(py, 1 - px * px)), seg,
                       certified=False, exact=False,
                       certificate={"grid_size": n, "points": int(x.size)},
                       elapsed=time.perf_counter() - start)
