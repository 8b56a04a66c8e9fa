"""The splicing certifier re-run on Arb balls (python-flint) as an independent enclosure oracle.

Same breakpoints, atoms and bisection order as the package, only the ball kernel is swapped.
Arb pads wide cosine enclosures more than the package kernel does, so its margins must sit
at or below the package margins, and they track the reference log closely.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from spectra_cert.splicing_cert import (
    BOX_FAMILIES,
    REFERENCE_LOG,
    STRIP_FAMILIES,
    TARGET,
    box_atoms,
    box_breakpoints,
    breakpoints,
    cell_coefficients,
    matching_digits,
    run_family,
    sub_intervals,
)

flint = pytest.importorskip("flint")
arb = flint.arb


@pytest.fixture(autouse=True, scope="module")
def arb_precision():
    old = flint.ctx.prec
    flint.ctx.prec = 256
    yield
    flint.ctx.prec = old


def exact(q) -> "arb":
    q = Fraction(q)
    return arb(q.numerator) / q.denominator


def hull(lo: Fraction, hi: Fraction) -> "arb":
    return arb(exact((lo + hi) / 2), exact((hi - lo) / 2))


def sin_antiderivative(u, alpha, beta, pi):
    a, b = exact(alpha), exact(beta)
    return -(a + b * u) * (2 * u * pi).cos() / (2 * pi) + b * (2 * u * pi).sin() / (4 * pi**2)


def sin_cos_antiderivative(u, alpha, beta, pi):
    a, b = exact(alpha), exact(beta)
    return -(a + b * u) * (4 * u * pi).cos() / (8 * pi) + b * (4 * u * pi).sin() / (32 * pi**2)


def strip_value(p: int, lo: Fraction, hi: Fraction):
    pi = arb.pi()
    rho = hull(lo, hi)
    c_rho = (2 * rho * pi).cos()
    total = arb(0)
    pts = breakpoints(p)
    for a, b in zip(pts, pts[1:]):
        alpha, beta = cell_coefficients(p, (a + b) / 2)
        aa = hull(a, a)
        upper = hull(b, b) if b <= lo else rho
        if b <= lo or a <= lo <= hi <= b:
            total += sin_cos_antiderivative(upper, alpha, beta, pi) - sin_cos_antiderivative(aa, alpha, beta, pi)
            total -= c_rho * (sin_antiderivative(upper, alpha, beta, pi) - sin_antiderivative(aa, alpha, beta, pi))
            if upper is rho:
                break
    return 16 * pi * total


def box_value(p: int, q: int, lo: Fraction, hi: Fraction):
    pi = arb.pi()
    c = (2 * hull(lo, hi) * pi).cos()
    total = arb(0)
    for alpha, sign in box_atoms(p, q):
        if alpha <= lo:
            total += sign * ((2 * hull(alpha, alpha) * pi).cos() - c) ** 2
    return 4 * total


def bisect(f, intervals, threshold):
    stack = [(lo, hi, 0) for lo, hi in intervals if lo < hi]
    boxes, deepest, margin = 0, 0, None
    while stack:
        lo, hi, depth = stack.pop()
        val = f(lo, hi) - threshold - exact(TARGET)
        if val.lower() > 0:
            boxes += 1
            deepest = max(deepest, depth)
            lb = mpmath.mpf(val.lower().str(40, radius=False))
            margin = lb if margin is None else min(margin, lb)
            continue
        mid = (lo + hi) / 2
        stack += [(lo, mid, depth + 1), (mid, hi, depth + 1)]
    return boxes, deepest, margin


def arb_family(family):
    if isinstance(family, tuple):
        p, q = family
        return bisect(lambda lo, hi: box_value(p, q, lo, hi), sub_intervals(box_breakpoints(p, q)), arb(0))
    pi = arb.pi()
    tail = 17 * arb(3).sqrt() * pi**2 / 27 * (exact(Fraction(1, 49)) + exact(Fraction(1, (family + 6) ** 2)))
    return bisect(lambda lo, hi: strip_value(family, lo, hi), sub_intervals(breakpoints(family)), tail)


@pytest.mark.parametrize("family", STRIP_FAMILIES + BOX_FAMILIES, ids=str)
def test_arb_enclosures_track_reference_and_bound_package_margin(family):
    boxes, depth, margin = arb_family(family)
    ref_boxes, ref_depth, ref_margin = REFERENCE_LOG[family]
    assert (boxes, depth) == (ref_boxes, ref_depth)
    assert matching_digits(margin, ref_margin) >= 6
    ours = run_family(family, 256, 20)
    assert (ours.boxes, ours.max_depth) == (boxes, depth)
    assert ours.min_margin >= margin
