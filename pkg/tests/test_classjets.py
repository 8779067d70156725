from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from loghankel.classjets import (CATALOG_NAMES, ClassTag, GridSpec, SchwarzJet, catalog, h22_chain,
                                 h22_ks_c, h22_ss_c, ks_jet, membership_report, ratio_series, ss_jet,
                                 subordinate_series)
from loghankel.logcoeff import TaylorJet, gammas_series
from loghankel.series import GaussianRational, SeriesError, horner_numpy, ts_from, ts_z

rationals = st.fractions(min_value=-2, max_value=2, max_denominator=9)
gaussians = st.builds(lambda a, b: GaussianRational(a, b) if b else a, rationals, rationals)
jets = st.builds(SchwarzJet, gaussians, gaussians, gaussians, gaussians)


@settings(max_examples=80, deadline=None)
@given(jets)
def test_jet_maps_agree_with_subordination_solve(c):
    w = ts_from([0, *c.as_tuple()], 5)
    for tag, jet_map in ((ClassTag.SS, ss_jet), (ClassTag.KS, ks_jet)):
        f = subordinate_series(tag, w)
        assert TaylorJet.from_series(f).as_tuple()[:4] == jet_map(c).as_tuple()[:4]


@settings(max_examples=80, deadline=None)
@given(jets)
def test_series_route_equals_c_polynomial(c):
    # independent of the closed jet maps and gamma formulas
    w = ts_from([0, *c.as_tuple()], 5)
    for tag, poly in ((ClassTag.SS, h22_ss_c), (ClassTag.KS, h22_ks_c)):
        g = gammas_series(subordinate_series(tag, w), 4)
        assert g[1] * g[3] - g[2] ** 2 == poly(c)


def test_chain_identity_symbolic():
    c = sp.symbols("c1:5")
    jet = SchwarzJet(*c)
    assert sp.expand(h22_chain("ss", jet) - h22_ss_c(jet)) == 0
    assert sp.expand(h22_chain("ks", jet) - h22_ks_c(jet)) == 0


def test_subordination_defining_equation_ss():
    # check 2 z f' = (f(z) - f(-z)) (1 + w)/(1 - w) coefficientwise
    w = ts_from([0, Fraction(1, 3), Fraction(-1, 2), 0, Fraction(1, 5)], 10)
    f = subordinate_series("ss", w)
    z = ts_z(10)
    lhs = 2 * z * ts_from([k * f[k] for k in range(1, 11)], 10)
    odd = ts_from([f[k] if k % 2 else 0 for k in range(11)], 10)
    one = ts_from([1], 10)
    rhs = 2 * odd * (one + w) / (one - w)
    assert lhs == rhs


def test_canonical_extremal_jets():
    assert h22_ss_c(SchwarzJet(0, 1)) == Fraction(1, 8)
    assert h22_ks_c(SchwarzJet(0, 1)) == Fraction(13, 1080)
    assert h22_ks_c(SchwarzJet(1, 0)) == Fraction(35, 55296)


def test_catalog_exact_entries():
    assert list(catalog("f2", order=6).series) == [0, 1, 0, 1, 0, 1, 0]
    assert list(catalog("g2", order=4).series) == [0, 1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
    assert list(catalog("atanh", order=5).series) == [0, 1, 0, Fraction(1, 3), 0, Fraction(1, 5)]
    assert list(catalog("koebe", order=4).series) == [0, 1, 2, 3, 4]


def test_catalog_unknown_name():
    with pytest.raises(KeyError):
        catalog("nope")
    assert set(CATALOG_NAMES) >= {"koebe", "f1", "f2", "g1", "g2", "atanh"}


def test_atanh_is_ks_image_of_z_squared():
    assert subordinate_series("ks", ts_from([0, 0, 1], 12)) == catalog("atanh", order=12).series


def test_f1_g1_constants_and_audit():
    f1 = catalog("f1", digits=60)
    g1 = catalog("g1", digits=60)
    with mpmath.workdps(60):
        expected_g1 = 2 * mpmath.cbrt(mpmath.mpf(2) / 5) * mpmath.root(mpmath.mpf(13) / 7, 6)
        assert abs(g1.constant - expected_g1) < mpmath.mpf(10) ** -50
        assert abs(g1.constant**6 - mpmath.mpf(3328) / 175) < mpmath.mpf(10) ** -45
    assert abs(float(f1.constant) - 1.3995449794) < 1e-9
    for entry in (f1, g1):
        assert abs(float(entry.analyticity_radius_estimate) * float(entry.constant) - 1) < 1e-15
        text = " ".join(entry.notes)
        assert "constant" in text and "membership" in text and "radius" in text


def test_class_tag_parse():
    assert ClassTag.parse("SS") is ClassTag.SS
    with pytest.raises(ValueError):
        ClassTag.parse("xx")


# membership

def closed_ratio(name, z):
    """2zf'/(f(z)-f(-z)) or 2(zf')'/(f(z)-f(-z))' evaluated from closed forms."""
    if name == "f2":
        return (1 + z**2) / (1 - z**2)
    if name == "g2":
        # f' = 1/(1-z), (zf')' = 1/(1-z)^2, (f(z)-f(-z))' = 2/(1-z^2)
        return (1 + z) / (1 - z)
    if name == "atanh":
        # f' = 1/(1-z^2), (zf')' = (1+z^2)/(1-z^2)^2
        return (1 + z**2) / (1 - z**2)
    raise KeyError(name)


@pytest.mark.parametrize("name,tag", [("f2", "ss"), ("g2", "ks"), ("atanh", "ks")])
def test_membership_passes_and_matches_closed_form(name, tag):
    rep = membership_report(catalog(name), tag)
    assert rep.verdict == "pass"
    assert rep.min_re > 1e-9
    z = GridSpec.default().points()
    assert abs(rep.min_re - float(np.min(np.real(closed_ratio(name, z))))) < 1e-9


def test_identity_ratio_is_one():
    z = GridSpec.default().points()
    for tag in ClassTag:
        num, den = ratio_series(ts_z(5), tag)
        assert np.allclose(horner_numpy(num, z) / horner_numpy(den, z), 1.0, rtol=0, atol=1e-15)
        rep = membership_report(ts_z(5), tag, polynomial=True)
        assert rep.verdict == "pass" and rep.min_re == pytest.approx(1.0, abs=1e-15)


def test_membership_fails_for_non_member():
    # z + z^3 has f'(i/sqrt(3)) = 0
    rep = membership_report(ts_from([0, 1, 0, 1], 3), "ss", polynomial=True)
    assert rep.verdict == "fail"


def test_membership_is_indeterminate_on_large_tail():
    rep = membership_report(catalog("koebe", order=20).series, "ss")
    assert rep.verdict == "indeterminate" and rep.warnings


def test_membership_rejects_unnormalized():
    with pytest.raises(SeriesError):
        membership_report(ts_from([0, 2], 3), "ss")


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec((0.5, 1.0), 10)
    with pytest.raises(ValueError):
        GridSpec((0.5,), 0)
