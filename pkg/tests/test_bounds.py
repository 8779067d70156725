from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy as sp

from loghankel.bounds import (EDGES, PRINTED_BOUNDARY, RegionPoint, analytic_gradient, boundary_restrictions,
                              closed_form_bound, gradient_audit, interior_exclusion, maximize_surface,
                              omega_grid, ss_argmax_x2, surface_eval, surface_grad, surface_m, surface_n)
from loghankel.classjets import ClassTag
from loghankel.interval import Interval
from loghankel.rootiso import peval


def random_interior(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.05, 0.95, n)
    y = rng.uniform(0.05, 0.95, n) * (1 - x**2)
    return x, y


@pytest.mark.parametrize("tag", ["ss", "ks"])
def test_gradient_matches_central_differences(tag):
    x, y = random_interior(25, 4)
    with mpmath.workdps(40):
        h = mpmath.mpf("1e-12")
        for xi, yi in zip(x, y):
            px, py = mpmath.mpf(xi), mpmath.mpf(yi)
            surf = surface_m if tag == "ss" else surface_n
            fd_x = (surf(px + h, py) - surf(px - h, py)) / (2 * h)
            fd_y = (surf(px, py + h) - surf(px, py - h)) / (2 * h)
            gx, gy = surface_grad(tag, (float(xi), float(yi)))
            scale = max(1.0, abs(float(fd_x)), abs(float(fd_y)))
            assert abs(gx - float(fd_x)) <= 1e-8 * scale
            assert abs(gy - float(fd_y)) <= 1e-8 * scale


def test_gradient_audit_reports_ss_dx_discrepancy():
    audit = gradient_audit("ss")
    dx = audit["partials"]["x"]
    assert not dx["matches"]
    assert dx["discrepant_terms"] == ["-72*x*y"]
    assert dx["points_disagreeing"] == audit["n_points"]
    assert audit["partials"]["y"]["matches"]
    ks = gradient_audit("ks")
    assert all(rec["matches"] and not rec["discrepant_terms"] for rec in ks["partials"].values())


def test_printed_gradient_is_available_for_comparison():
    both = surface_grad("ss", (0.5, 0.25), source="both")
    ax, ay = both["analytic"]
    px, py = both["printed"]
    assert ay == pytest.approx(py)
    assert ax - px == pytest.approx(-72 * 0.5 * 0.25)


def test_gradient_can_require_interior():
    with pytest.raises(ValueError):
        surface_grad("ss", (0, Fraction(1, 2)), require_interior=True)


@pytest.mark.parametrize("tag", ["ss", "ks"])
def test_boundary_polynomials_by_rational_interpolation(tag):
    # independent of the symbolic substitution: exact values at 8 rational
    # points determine a degree <= 7 polynomial, compare with the printed one
    restrictions = boundary_restrictions(tag)
    surf = surface_m if tag == "ss" else surface_n
    t = sp.Symbol("t")
    for edge in EDGES:
        pts = [Fraction(k, 7) for k in range(8)]
        vals = []
        for s in pts:
            x, y = {"y=0": (s, 0), "x=0": (0, s), "y=1-x^2": (s, 1 - s * s)}[edge]
            vals.append(surf(Fraction(x), Fraction(y)))
        interp = sp.interpolate([(sp.Rational(str(p)), sp.Rational(str(v))) for p, v in zip(pts, vals)], t)
        coeffs = [Fraction(str(c)) for c in reversed(sp.Poly(interp, t).all_coeffs())]
        printed = list(PRINTED_BOUNDARY[(ClassTag.parse(tag), edge)])
        printed += [0] * (len(coeffs) - len(printed))
        assert coeffs == printed
        assert restrictions[edge].matches_printed


def test_ss_certified_maximum():
    rep = maximize_surface("ss")
    cf = closed_form_bound("ss")
    assert rep.certified
    assert rep.segment == "y=1-x^2"
    assert abs(rep.max_value - cf.surface_max) <= 1e-9
    assert abs(rep.argmax.x**2 - ss_argmax_x2()) <= 1e-9
    assert abs(rep.h_bound - cf.value) <= 1e-9
    with mpmath.workdps(60):
        lo, hi = (mpmath.mpf(v.numerator) / v.denominator for v in rep.enclosure)
        assert lo <= cf.surface_max <= hi
        assert hi - lo < 1e-9
    assert rep.certificate["interior"]["certified"]


def test_ks_certified_maximum_is_exact():
    rep = maximize_surface("ks")
    assert rep.certified and rep.exact
    assert rep.max_value == 3328
    assert rep.argmax.as_tuple() == (0, 1)
    assert rep.h_bound == Fraction(13, 1080)
    assert set(rep.attaining_edges) == {"x=0", "y=1-x^2"}


def test_closed_form_values_independently():
    with mpmath.workdps(60):
        x2 = (30 - mpmath.sqrt(678)) / 37
        edge = 37 * x2**3 - 90 * x2**2 + 18 * x2 + 36
        assert abs(edge - closed_form_bound("ss").surface_max) < mpmath.mpf(10) ** -50
        assert abs(edge / 288 - closed_form_bound("ss").value) < mpmath.mpf(10) ** -50
    assert surface_eval("ks", (0, 1)) == 3328


@pytest.mark.parametrize("tag", ["ss", "ks"])
def test_grid_never_exceeds_certified(tag):
    grid = maximize_surface(tag, "grid", grid_size=600)
    cert = maximize_surface(tag)
    assert not grid.certified
    assert float(grid.max_value) <= float(cert.enclosure[1]) + 1e-9
    assert float(grid.max_value) >= float(cert.max_value) - 1e-3


@pytest.mark.parametrize("tag", ["ss", "ks"])
def test_surface_bounded_on_random_points(tag):
    x, y = omega_grid(300)
    vals = surface_m(x, y) if tag == "ss" else surface_n(x, y)
    assert np.max(vals) <= float(maximize_surface(tag).enclosure[1])


def test_interval_surface_encloses_point_values():
    x, y = random_interior(200, 9)
    xi, yi = Interval(x, x + 1e-3), Interval(y, y + 1e-3)
    for surf in (surface_m, surface_n):
        enc = surf(xi, yi)
        mid = surf(x + 5e-4, y + 5e-4)
        assert np.all(enc.lo <= mid) and np.all(mid <= enc.hi)


def test_interior_exclusion_negative_control():
    # a bump with an interior maximum above the threshold cannot be excluded
    bump = lambda x, y: -((x - 0.3) ** 2 + (y - 0.3) ** 2)
    grad = lambda x, y: (-2 * (x - 0.3), -2 * (y - 0.3))
    cert = interior_exclusion(None, -0.01, surface=bump, gradient=grad, max_depth=12)
    assert not cert["certified"]
    assert cert["reason"] == "maximum depth reached"


def test_interior_exclusion_budget_exhaustion():
    cert = interior_exclusion("ss", 30.0, cell_budget=1000)
    assert not cert["certified"]


def test_region_point_validation():
    RegionPoint(Fraction(1, 2), Fraction(3, 4))
    with pytest.raises(ValueError):
        RegionPoint(Fraction(1, 2), Fraction(4, 5))
    with pytest.raises(ValueError):
        RegionPoint(-0.1, 0.2)


def test_analytic_gradient_on_intervals_encloses_points():
    x, y = random_interior(50, 2)
    gx, gy = analytic_gradient("ks", Interval(x, x + 1e-4), Interval(y, y + 1e-4))
    px, py = analytic_gradient("ks", x + 5e-5, y + 5e-5)
    assert np.all((gx.lo <= px) & (px <= gx.hi))
    assert np.all((gy.lo <= py) & (py <= gy.hi))


def test_boundary_polynomial_evaluates_like_surface():
    for tag, surf in (("ss", surface_m), ("ks", surface_n)):
        for edge, bp in boundary_restrictions(tag).items():
            for s in (Fraction(1, 3), Fraction(5, 8)):
                x, y = bp.point(s)
                assert peval(bp.coeffs, s) == surf(Fraction(x), Fraction(y))
