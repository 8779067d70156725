"""Monte Carlo stress test of the H22 bounds over sampled Schwarz functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .bounds import SURFACES, NORMALIZER, closed_form_bound
from .classjets import H22_C, ClassTag, SchwarzJet
from .schwarz import SchwarzModel, default_models, lemma_feasible, sample_jets

TOLERANCE = 1e-12
# Float samples within this distance of an exact candidate count as ties.
TIE_TOLERANCE = 1e-15
CHUNK = 50_000
MAX_RECORDED = 20

CANONICAL_JETS = (SchwarzJet(0, 1, 0, 0), SchwarzJet(1, 0, 0, 0))


@dataclass
class SearchReport:
    tag: ClassTag
    trials: int
    seed: int
    best_value: object = Fraction(0)
    best_jet: tuple | None = None
    bound: object = None
    gap: object = None
    violations: list = field(default_factory=list)
    violation_count: int = 0
    surface_violations: int = 0
    max_surface_ratio: float = 0.0
    excluded: list = field(default_factory=list)
    evaluated: int = 0
    canonical: bool = True
    models: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "class": self.tag.value,
            "trials": self.trials,
            "seed": self.seed,
            "evaluated": self.evaluated,
            "best_value": self.best_value,
            "best_jet": None if self.best_jet is None else list(self.best_jet),
            "bound": self.bound,
            "gap": self.gap,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "surface_violations": self.surface_violations,
            "max_surface_ratio": self.max_surface_ratio,
            "excluded": self.excluded,
            "canonical_candidates": self.canonical,
            "models": self.models,
        }


def h22_values(tag: ClassTag, jets: np.ndarray) -> np.ndarray:
    """Complex H22 values for an (n, 4) array of jets."""
    return H22_C[tag](SchwarzJet(*(jets[:, k] for k in range(4))))


def surface_ratio(tag: ClassTag, jets: np.ndarray, values: np.ndarray) -> np.ndarray:
    """normalizer * |H22| / surface(|c1|, |c2|); at most 1 for feasible jets."""
    m = np.abs(jets)
    surf = SURFACES[tag](m[:, 0], m[:, 1])
    return NORMALIZER[tag] * np.abs(values) / surf


def empirical_max(tag, trials: int, seed: int = 0, models=None, include_canonical: bool = True,
                  extra_jets=(), digits: int = 60) -> SearchReport:
    """Largest |H22| over sampled Schwarz jets, split evenly across ``models``.

    Each model gets its own child seed from ``numpy.random.SeedSequence(seed)``
    so the report is deterministic in (seed, trials, models). ``extra_jets``
    are checked against the coefficient inequalities first; infeasible ones
    are excluded and listed, never evaluated.
    """
    tag = ClassTag.parse(tag)
    if trials < 0:
        raise ValueError("trials must be >= 0")
    models = tuple(models) if models is not None else default_models()
    cf = closed_form_bound(tag, digits)
    bound = float(cf.value)
    report = SearchReport(tag, trials, seed, bound=cf.value, canonical=include_canonical,
                          models=[_model_label(m) for m in models])

    exact_best: tuple | None = None
    exact_jets = list(CANONICAL_JETS) if include_canonical else []
    for jet in extra_jets:
        verdict = lemma_feasible(jet, TOLERANCE)
        if not verdict.feasible:
            report.excluded.append({
                "jet": list(jet.as_tuple()),
                "reason": "out-of-contract input: violates the Schwarz coefficient inequalities",
                "slacks": [float(s) for s in verdict.slacks],
            })
            continue
        exact_jets.append(jet)
    for jet in exact_jets:
        value = abs(H22_C[tag](jet))
        report.evaluated += 1
        if _exceeds(value, cf.value):
            _record_violation(report, jet.as_tuple(), value)
        if exact_best is None or _as_mp(value) > _as_mp(exact_best[0]):
            exact_best = (value, jet.as_tuple())

    float_best = (-1.0, None)
    if trials and models:
        counts = [trials // len(models) + (1 if k < trials % len(models) else 0) for k in range(len(models))]
        children = np.random.SeedSequence(seed).spawn(len(models))
        for model, count, child in zip(models, counts, children):
            rng_seed = np.random.default_rng(child)
            done = 0
            while done < count:
                n = min(CHUNK, count - done)
                jets = sample_jets(rng_seed.integers(2**63), model, n)
                vals = h22_values(tag, jets)
                mags = np.abs(vals)
                ratios = surface_ratio(tag, jets, vals)
                report.evaluated += n
                report.surface_violations += int(np.sum(ratios > 1 + TOLERANCE))
                report.max_surface_ratio = max(report.max_surface_ratio, float(np.nanmax(ratios)))
                over = np.nonzero(mags > bound + TOLERANCE)[0]
                for k in over:
                    _record_violation(report, tuple(complex(c) for c in jets[k]), float(mags[k]))
                k = int(np.argmax(mags))
                if mags[k] > float_best[0]:
                    float_best = (float(mags[k]), tuple(complex(c) for c in jets[k]))
                done += n

    if exact_best is not None and float_best[0] <= float(exact_best[0]) + TIE_TOLERANCE:
        report.best_value, report.best_jet = exact_best
    elif float_best[1] is not None:
        report.best_value, report.best_jet = float_best
    else:
        report.best_value, report.best_jet = Fraction(0), None
    if report.best_jet is not None:
        report.gap = _gap(cf.value, report.best_value, digits)
    return report


def certify_no_violation(report: SearchReport) -> bool:
    """True iff no evaluated jet exceeded the class bound by more than 1e-12."""
    if report.violation_count:
        return False
    if report.best_jet is None:
        return True
    return not _exceeds(report.best_value, report.bound)


def _exceeds(value, bound) -> bool:
    if isinstance(value, Fraction) and isinstance(bound, Fraction):
        return value > bound
    return _as_mp(value) > _as_mp(bound) + TOLERANCE


def _as_mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _gap(bound, best, digits):
    if isinstance(bound, Fraction) and isinstance(best, Fraction):
        return bound - best
    with mpmath.workdps(digits):
        return _as_mp(bound) - _as_mp(best)


def _record_violation(report: SearchReport, jet: tuple, value) -> None:
    report.violation_count += 1
    if len(report.violations) < MAX_RECORDED:
        report.violations.append({"jet": list(jet), "value": value})


def _model_label(model: SchwarzModel) -> str:
    if model.kind == "monomial":
        return f"monomial(power={model.power})"
    if model.kind == "blaschke_product":
        n = "random" if model.n_factors is None else model.n_factors
        return f"blaschke_product(factors={n})"
    return f"composition(depth={model.depth})"
