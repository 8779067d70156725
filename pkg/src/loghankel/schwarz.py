"""Schwarz functions: genuine self-maps of the disk, their jets, and the
necessary coefficient inequalities

    |c1| <= 1,  |c2| <= 1 - |c1|^2,
    |c3| <= 1 - |c1|^2 - |c2|^2 / (1 + |c1|),  |c4| <= 1 - |c1|^2 - |c2|^2.

Samplers build w(z) = e^{i theta} z prod_k (alpha_k + z)/(1 + conj(alpha_k) z)
and compositions of such maps, so every sampled jet is feasible by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from . import series as ts
from .classjets import SchwarzJet
from .series import EXACT, FLOAT, GaussianRational, TruncatedSeries

KINDS = ("monomial", "blaschke_product", "composition")
MAX_DEPTH = 3
JET_ORDER = 12


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    slacks: tuple

    def __bool__(self):
        return self.feasible


def modulus(v, digits: int = ts.DEFAULT_DIGITS):
    """|v|, exact for rationals and perfect squares, else mpmath at ``digits``."""
    if isinstance(v, Rational):
        return abs(Fraction(v))
    if isinstance(v, GaussianRational):
        sq = v.abs2()
        rn, rd = math.isqrt(sq.numerator), math.isqrt(sq.denominator)
        if rn * rn == sq.numerator and rd * rd == sq.denominator:
            return Fraction(rn, rd)
        with mpmath.workdps(digits):
            return mpmath.sqrt(mpmath.mpf(sq.numerator) / sq.denominator)
    return abs(v)


def lemma_slacks(c: SchwarzJet) -> tuple:
    mods = [modulus(v) for v in c.as_tuple()]
    if not all(isinstance(m, Fraction) for m in mods):
        # an irrational modulus: finish the check in mpmath
        mods = [mpmath.mpf(m.numerator) / m.denominator if isinstance(m, Fraction) else m for m in mods]
    m1, m2, m3, m4 = mods
    return (
        1 - m1,
        1 - m1**2 - m2,
        1 - m1**2 - m2**2 / (1 + m1) - m3,
        1 - m1**2 - m2**2 - m4,
    )


def lemma_feasible(c: SchwarzJet, tol: float = 0.0) -> FeasibilityVerdict:
    """Check the four coefficient inequalities; ``tol`` absorbs float rounding."""
    slacks = lemma_slacks(c)
    return FeasibilityVerdict(all(s >= -tol for s in slacks), slacks)


def jet_of(w: TruncatedSeries) -> SchwarzJet:
    if w[0] != 0:
        raise ts.SeriesError("a Schwarz function vanishes at 0")
    if w.order < 4:
        raise ts.SeriesError("need order >= 4 to read c1..c4")
    return SchwarzJet(w[1], w[2], w[3], w[4])


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class SchwarzModel:
    """Description of a Schwarz function family.

    Fields left as ``None`` are drawn from the seed when sampling:

    * ``monomial``: w = e^{i phase} z^power.
    * ``blaschke_product``: w = e^{i phase} z prod (alpha + z)/(1 + conj(alpha) z)
      with ``n_factors`` factors (zero factors gives a rotation).
    * ``composition``: w = components[0] o components[1] o ..., ``depth`` <= 3
      blaschke products.
    """

    kind: str
    power: int = 1
    n_factors: int | None = 1
    alphas: tuple | None = None
    phase: object | None = None
    depth: int = 2
    components: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown Schwarz model kind {self.kind!r}")
        if self.kind == "monomial" and self.power < 1:
            raise ValueError("monomial power must be >= 1")
        if self.kind == "composition" and not 1 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"composition depth must be in 1..{MAX_DEPTH}")
        if self.alphas is not None:
            for a in self.alphas:
                if not abs(complex(a)) < 1:
                    raise ValueError(f"Blaschke parameter {a!r} is not inside the open unit disk")

    @classmethod
    def monomial(cls, power: int = 1, phase=0) -> SchwarzModel:
        return cls("monomial", power=power, phase=phase)

    @classmethod
    def blaschke(cls, alphas=None, phase=0, n_factors: int | None = None) -> SchwarzModel:
        if alphas is not None:
            alphas = tuple(alphas)
            n_factors = len(alphas)
        return cls("blaschke_product", n_factors=n_factors, alphas=alphas, phase=phase)

    @classmethod
    def composition(cls, components=None, depth: int = 2) -> SchwarzModel:
        if components is not None:
            components = tuple(components)
            depth = len(components)
        return cls("composition", depth=depth, components=components)

    def realize(self, rng: np.random.Generator) -> SchwarzModel:
        """Fill every unspecified parameter from ``rng``."""
        if self.kind == "monomial":
            phase = self.phase if self.phase is not None else float(rng.uniform(0, 2 * np.pi))
            return replace(self, phase=phase)
        if self.kind == "blaschke_product":
            n = self.n_factors if self.n_factors is not None else int(rng.integers(0, 4))
            alphas = self.alphas if self.alphas is not None else tuple(complex(a) for a in _draw_alphas(rng, n))
            phase = self.phase if self.phase is not None else float(rng.uniform(0, 2 * np.pi))
            return replace(self, n_factors=len(alphas), alphas=alphas, phase=phase)
        comps = self.components
        if comps is None:
            comps = tuple(SchwarzModel("blaschke_product", n_factors=None, phase=None) for _ in range(self.depth))
        return replace(self, depth=len(comps), components=tuple(c.realize(rng) for c in comps))

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Closed-form values of a realized model on a point array."""
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "monomial":
            return np.exp(1j * float(self.phase)) * z**self.power
        if self.kind == "blaschke_product":
            out = np.exp(1j * float(self.phase)) * z
            for a in self.alphas:
                a = complex(a)
                out = out * (a + z) / (1 + np.conj(a) * z)
            return out
        out = z
        for comp in reversed(self.components):
            out = comp.evaluate(out)
        return out

    def is_realized(self) -> bool:
        if self.kind == "monomial":
            return self.phase is not None
        if self.kind == "blaschke_product":
            return self.alphas is not None and self.phase is not None
        return self.components is not None and all(c.is_realized() for c in self.components)


def _draw_alphas(rng: np.random.Generator, n: int) -> np.ndarray:
    """Disk points, half area-uniform and half pushed towards the circle."""
    u = rng.uniform(size=n)
    near_edge = rng.uniform(size=n) < 0.5
    r = np.where(near_edge, 1 - u**3, np.sqrt(u)) * (1 - 1e-12)
    theta = rng.uniform(0, 2 * np.pi, size=n)
    return r * np.exp(1j * theta)


def _exact_or_float(v):
    """Exact scalars stay exact; everything else becomes a Python complex."""
    if isinstance(v, (Rational, GaussianRational)):
        return ts.to_exact(v)
    return complex(v)


def model_series(model: SchwarzModel, order: int = JET_ORDER, digits: int = ts.DEFAULT_DIGITS) -> TruncatedSeries:
    """Taylor expansion of a realized model through the series module.

    Exact (rational) parameters with zero phase give an exact-mode series;
    anything else is expanded in float mode.
    """
    if not model.is_realized():
        raise ValueError("model has unspecified parameters; call realize() first")
    mode = EXACT if _all_exact(model) else FLOAT
    return _series(model, order, mode, digits)


def _all_exact(model: SchwarzModel) -> bool:
    if model.kind == "composition":
        return all(_all_exact(c) for c in model.components)
    if model.phase != 0:
        return False
    return all(isinstance(a, (Rational, GaussianRational)) for a in (model.alphas or ()))


def _rotation(phase, mode, digits):
    if mode == EXACT:
        return Fraction(1)
    with mpmath.workdps(digits):
        return mpmath.expj(ts.to_mp(phase, digits)) if phase else mpmath.mpf(1)


def _scalar(v, mode, digits):
    if mode == EXACT:
        return ts.to_exact(v)
    if isinstance(v, complex):
        return mpmath.mpc(v.real, v.imag)
    return ts.to_mp(v, digits)


def _series(model, order, mode, digits):
    z = ts.ts_z(order, mode, digits)
    if model.kind == "monomial":
        coeffs = [0] * (order + 1)
        if model.power <= order:
            coeffs[model.power] = _rotation(model.phase, mode, digits)
        return ts.ts_from(coeffs, order, mode, digits)
    if model.kind == "blaschke_product":
        out = ts.ts_scale(z, _rotation(model.phase, mode, digits))
        one = ts.ts_from([1], order, mode, digits)
        for a in model.alphas:
            a = _scalar(_exact_or_float(a), mode, digits)
            abar = a.conjugate() if hasattr(a, "conjugate") else a
            factor = ts.ts_div(z + ts.ts_from([a], order, mode, digits), one + ts.ts_scale(z, abar))
            out = ts.ts_mul(out, factor)
        return out
    out = z
    for comp in reversed(model.components):
        out = ts.ts_compose(_series(comp, order, mode, digits), out)
    return out


def sample_jet(seed: int, model: SchwarzModel, digits: int = ts.DEFAULT_DIGITS) -> SchwarzJet:
    """Realize ``model`` from ``seed``, expand it as a series and read c1..c4."""
    rng = np.random.default_rng(seed)
    realized = model.realize(rng)
    return jet_of(model_series(realized, JET_ORDER, digits))


# ---------------------------------------------------------------------------
# vectorised sampling for large stress tests

def _jet_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for k in range(a.shape[1]):
        out[:, k] = np.sum(a[:, : k + 1] * b[:, k::-1], axis=1)
    return out


def _blaschke_jets(alphas: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Jets (c0..c4) of e^{i phase} z prod (alpha + z)/(1 + conj(alpha) z), rows = samples."""
    n = phases.shape[0]
    out = np.zeros((n, 5), dtype=np.complex128)
    out[:, 1] = np.exp(1j * phases)
    for j in range(alphas.shape[1]):
        a = alphas[:, j]
        fac = np.zeros((n, 5), dtype=np.complex128)
        fac[:, 0] = a
        scale = 1 - np.abs(a) ** 2
        for k in range(1, 5):
            fac[:, k] = scale * (-np.conj(a)) ** (k - 1)
        out = _jet_mul(out, fac)
    return out


def _compose_jets(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    out = np.zeros_like(outer)
    power = np.zeros_like(inner)
    power[:, 0] = 1
    for k in range(1, 5):
        power = _jet_mul(power, inner)
        out += outer[:, k : k + 1] * power
    return out


def sample_jets(seed, model: SchwarzModel, n: int) -> np.ndarray:
    """``n`` jets (columns c1..c4) drawn from ``model`` in one vectorised pass.

    Explicit model parameters are honoured; missing ones are drawn per sample.
    Returns a complex array of shape (n, 4).
    """
    rng = np.random.default_rng(seed)
    full = _sample_full(rng, model, n)
    return full[:, 1:5]


def _sample_full(rng, model: SchwarzModel, n: int) -> np.ndarray:
    if model.kind == "monomial":
        phases = rng.uniform(0, 2 * np.pi, n) if model.phase is None else np.full(n, float(model.phase))
        out = np.zeros((n, 5), dtype=np.complex128)
        if model.power <= 4:
            out[:, model.power] = np.exp(1j * phases)
        return out
    if model.kind == "blaschke_product":
        phases = rng.uniform(0, 2 * np.pi, n) if model.phase is None else np.full(n, float(model.phase))
        if model.alphas is not None:
            alphas = np.tile(np.array([complex(a) for a in model.alphas], dtype=np.complex128), (n, 1))
        elif model.n_factors is not None:
            alphas = _draw_alphas(rng, n * model.n_factors).reshape(n, model.n_factors)
        else:
            counts = rng.integers(0, 4, n)
            alphas = _draw_alphas(rng, n * 3).reshape(n, 3)
            return _mixed_blaschke(alphas, counts, phases)
        return _blaschke_jets(alphas, phases)
    comps = model.components or tuple(SchwarzModel("blaschke_product", n_factors=None, phase=None)
                                      for _ in range(model.depth))
    out = None
    for comp in reversed(comps):
        jets = _sample_full(rng, comp, n)
        out = jets if out is None else _compose_jets(jets, out)
    return out


def _mixed_blaschke(alphas: np.ndarray, counts: np.ndarray, phases: np.ndarray) -> np.ndarray:
    out = np.zeros((len(phases), 5), dtype=np.complex128)
    for m in range(alphas.shape[1] + 1):
        rows = counts == m
        if np.any(rows):
            out[rows] = _blaschke_jets(alphas[rows, :m], phases[rows])
    return out


def lemma_slacks_array(jets: np.ndarray) -> np.ndarray:
    """Vectorised slacks of the four inequalities, shape (n, 4)."""
    m = np.abs(jets)
    m1, m2, m3, m4 = m[:, 0], m[:, 1], m[:, 2], m[:, 3]
    return np.stack([
        1 - m1,
        1 - m1**2 - m2,
        1 - m1**2 - m2**2 / (1 + m1) - m3,
        1 - m1**2 - m2**2 - m4,
    ], axis=1)


def sample_raw_feasible(rng: np.random.Generator, n: int, max_tries: int = 1000) -> np.ndarray:
    """Rejection sampler on raw coefficients, used only to exercise lemma_feasible."""
    out = []
    tries = 0
    while len(out) < n and tries < max_tries:
        tries += 1
        cand = (rng.uniform(-1, 1, (4 * n, 4)) + 1j * rng.uniform(-1, 1, (4 * n, 4)))
        ok = np.all(lemma_slacks_array(cand) >= 0, axis=1)
        out.extend(cand[ok])
    return np.array(out[:n])


def default_models() -> tuple:
    """The model pool used by the empirical search."""
    return (
        SchwarzModel("monomial", power=1, phase=None),
        SchwarzModel("monomial", power=2, phase=None),
        SchwarzModel("blaschke_product", n_factors=1, phase=None),
        SchwarzModel("blaschke_product", n_factors=2, phase=None),
        SchwarzModel("blaschke_product", n_factors=None, phase=None),
        SchwarzModel("composition", depth=2),
        SchwarzModel("composition", depth=3),
    )
