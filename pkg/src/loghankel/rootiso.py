"""Exact real-root isolation for univariate polynomials with rational coefficients.

Polynomials are tuples of ``Fraction`` coefficients in ascending degree.
Roots are counted with Sturm sequences and isolated/refined by bisection on
rational endpoints; nothing is rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = tuple


def poly(coeffs: Sequence) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (Fraction(0),)


def degree(p: Poly) -> int:
    p = poly(p)
    return -1 if p == (0,) else len(p) - 1


def peval(p: Poly, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pderiv(p: Poly) -> Poly:
    return poly([k * p[k] for k in range(1, len(p))] or [0])



def pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = poly(a), poly(b)
    if b == (0,):
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (Fraction(0),), a
    quot = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        coef = rem[k + db] / b[-1]
        quot[k] = coef
        for j in range(db + 1):
            rem[k + j] -= coef * b[j]
    return poly(quot), poly(rem[:db] or [0])


def pgcd(a: Poly, b: Poly) -> Poly:
    a, b = poly(a), poly(b)
    while b != (0,):
        a, b = b, pdivmod(a, b)[1]
    return poly([c / a[-1] for c in a])


def squarefree(p: Poly) -> Poly:
    p = poly(p)
    if degree(p) < 1:
        return p
    return pdivmod(p, pgcd(p, pderiv(p)))[0]


def sturm_sequence(p: Poly) -> list[Poly]:
    p = poly(p)
    seq = [p, pderiv(p)]
    while degree(seq[-1]) > 0:
        r = pdivmod(seq[-2], seq[-1])[1]
        if r == (0,):
            break
        seq.append(poly([-c for c in r]))
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(seq: list[Poly], a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b] of the polynomial heading ``seq``."""
    return _sign_changes([peval(q, a) for q in seq]) - _sign_changes([peval(q, b) for q in seq])


def isolate_roots(p: Poly, a, b) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals [lo, hi] in [a, b], each holding exactly one real root.

    Degenerate intervals lo == hi mark exact rational roots; otherwise p
    changes sign strictly between lo and hi.
    """
    a, b = Fraction(a), Fraction(b)
    q = squarefree(p)
    if q == (0,):
        raise ValueError("the zero polynomial has no isolated roots")
    if degree(q) < 1:
        return []
    seq = sturm_sequence(q)
    found = [(a, a)] if peval(q, a) == 0 else []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1 and peval(q, hi) == 0:
            found.append((hi, hi))
            continue
        if n == 1 and peval(q, lo) != 0:
            found.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.extend([(lo, mid), (mid, hi)])
    return sorted(set(found))


def refine_root(p: Poly, lo, hi, width) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a simple sign-changing root to ``width``."""
    lo, hi, width = Fraction(lo), Fraction(hi), Fraction(width)
    q = squarefree(p)
    if lo == hi:
        return lo, hi
    flo = peval(q, lo)
    if flo == 0:
        return lo, lo
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = peval(q, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of p over [lo, hi] (naive interval Horner)."""
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(p):
        prods = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(prods) + c, max(prods) + c
    return acc_lo, acc_hi
