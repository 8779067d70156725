from fractions import Fraction

import numpy as np
import pytest

from loghankel.bounds import surface_m, surface_n
from loghankel.classjets import ClassTag, SchwarzJet, h22_ks_c, h22_ss_c
from loghankel.schwarz import SchwarzModel, default_models, sample_jets
from loghankel.search import certify_no_violation, empirical_max, h22_values


def test_search_is_deterministic():
    a = empirical_max("ss", 5000, seed=3)
    b = empirical_max("ss", 5000, seed=3)
    assert a.to_dict() == b.to_dict()


def test_canonical_candidates_are_exact_best():
    ss = empirical_max("ss", 20_000, seed=1)
    ks = empirical_max("ks", 20_000, seed=1)
    assert ss.best_value == Fraction(1, 8) and ss.best_jet == (0, 1, 0, 0)
    assert ks.best_value == Fraction(13, 1080) and ks.gap == 0
    assert certify_no_violation(ss) and certify_no_violation(ks)
    assert ss.surface_violations == 0 and ks.surface_violations == 0


def test_vectorised_h22_matches_exact_polynomials():
    jets = sample_jets(5, default_models()[4], 50)
    for tag, poly in (("ss", h22_ss_c), ("ks", h22_ks_c)):
        fast = h22_values(ClassTag(tag), jets)
        slow = [complex(poly(SchwarzJet(*map(complex, row)))) for row in jets]
        assert np.allclose(fast, slow, rtol=1e-12, atol=1e-15)


def test_surface_ratio_pointwise():
    for model in default_models():
        jets = sample_jets(9, model, 2000)
        m = np.abs(jets)
        ss = 288 * np.abs(np.array([h22_ss_c(SchwarzJet(*row)) for row in jets]))
        ks = 276480 * np.abs(np.array([h22_ks_c(SchwarzJet(*row)) for row in jets]))
        assert np.all(ss <= surface_m(m[:, 0], m[:, 1]) * (1 + 1e-12) + 1e-12)
        assert np.all(ks <= surface_n(m[:, 0], m[:, 1]) * (1 + 1e-12) + 1e-12)


def test_zero_trials_without_candidates():
    rep = empirical_max("ss", 0, include_canonical=False)
    assert rep.best_value == 0 and rep.best_jet is None
    assert certify_no_violation(rep)


def test_infeasible_extra_jet_is_excluded():
    rep = empirical_max("ss", 0, extra_jets=[SchwarzJet(1, 1)])
    assert len(rep.excluded) == 1
    assert "out-of-contract" in rep.excluded[0]["reason"]
    assert certify_no_violation(rep)


def test_violation_is_detected_for_injected_report():
    rep = empirical_max("ks", 0)
    rep.best_value = Fraction(13, 1080) + Fraction(1, 10**6)
    assert not certify_no_violation(rep)


def test_fixed_model_search():
    rep = empirical_max("ss", 1000, seed=0, models=[SchwarzModel.monomial(2, phase=None)])
    # e^{it} z^2 gives c2 = e^{it}, |H| = 1/8 exactly in modulus
    assert abs(float(rep.best_value) - 0.125) < 1e-12


def test_negative_trials():
    with pytest.raises(ValueError):
        empirical_max("ss", -1)
