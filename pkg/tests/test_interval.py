from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from spectra_cert.ball import Ball, BallError, ball_from_rational, ball_hull, cos2pi, pi_ball, sin2pi
from spectra_cert.splicing_cert import (
    BOX_FAMILIES,
    REFERENCE_LOG,
    STRIP_FAMILIES,
    CertificationFailure,
    box_atoms,
    cell_coefficients,
    certify_bisect,
    d_strip,
    k_box,
    matching_digits,
    run_family,
)

PREC = 128
rationals = st.fractions(-20, 20, max_denominator=997)


def true_value(fn, *qs):
    with mpmath.workprec(4 * PREC):
        return fn(*[mpmath.mpf(q.numerator) / q.denominator for q in qs])


@given(rationals, rationals)
def test_arithmetic_encloses_true_value(a, b):
    x, y = ball_from_rational(a, PREC), ball_from_rational(b, PREC)
    for ball, exact in [(x + y, a + b), (x - y, a - b), (x * y, a * b)]:
        assert ball.contains(true_value(lambda v: v, exact))
    if b != 0:
        assert (x / y).contains(true_value(lambda u, v: u / v, a, b))


@given(rationals)
def test_trig_and_sqrt_enclose_true_value(a):
    x = ball_from_rational(a, PREC)
    assert x.cos().contains(true_value(mpmath.cos, a))
    assert x.sin().contains(true_value(mpmath.sin, a))
    assert cos2pi(x).contains(true_value(lambda v: mpmath.cos(2 * mpmath.pi * v), a))
    assert sin2pi(x).contains(true_value(lambda v: mpmath.sin(2 * mpmath.pi * v), a))
    if a >= 0:
        assert x.sqrt().contains(true_value(mpmath.sqrt, a))


def test_random_rationals_batch():
    rng = random.Random(2)
    for _ in range(1000):
        q = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
        x = ball_from_rational(q, PREC)
        assert x.contains(true_value(lambda v: v, q))
        assert x.cos().contains(true_value(mpmath.cos, q))
        assert x.sin().contains(true_value(mpmath.sin, q))


def test_rational_ball_radius():
    b = ball_from_rational(Fraction(1, 6), PREC)
    assert b.rad > 0
    assert b.contains(true_value(lambda v: v, Fraction(1, 6)))
    assert ball_from_rational(Fraction(3, 8), PREC).rad == 0
    assert b.rad <= mpmath.mpf(2) ** (-PREC + 2)


def test_quarter_turn_cosine_encloses_zero():
    c = cos2pi(ball_from_rational(Fraction(1, 4), 128))
    assert c.contains(0) and c.rad <= 1e-15


def test_pi_enclosure():
    p = pi_ball(256)
    with mpmath.workprec(600):
        assert p.contains(+mpmath.pi)
    assert p.rad <= mpmath.mpf(2) ** -250


@given(st.fractions(-3, 3, max_denominator=50), st.fractions(0, 1, max_denominator=50))
def test_bisection_children_inside_parent(lo, width):
    hi = lo + width
    mid = (lo + hi) / 2
    parent = cos2pi(ball_hull(lo, hi, PREC))
    for child in (cos2pi(ball_hull(lo, mid, PREC)), cos2pi(ball_hull(mid, hi, PREC))):
        with mpmath.workprec(4 * PREC):
            assert child.lower() >= parent.lower() - 2 * parent.rad
            assert child.upper() <= parent.upper() + 2 * parent.rad


def integrand(p, rho):
    def f(u):
        frac = p * u - mpmath.floor(p * u)
        coeff = (1 if u < mpmath.mpf(1) / 6 else 0) + u - frac
        return coeff * 16 * mpmath.pi * mpmath.sin(2 * mpmath.pi * u) * (
            mpmath.cos(2 * mpmath.pi * u) - mpmath.cos(2 * mpmath.pi * rho))
    return f


def quadrature(p, rho):
    pts = sorted({mpmath.mpf(0), mpmath.mpf(1) / 6, rho} | {mpmath.mpf(k) / p for k in range(p + 1) if k / p < rho})
    pts = [x for x in pts if x <= rho]
    with mpmath.workdps(30):
        return mpmath.quad(integrand(p, rho), pts)


def test_degenerate_strip_matches_quadrature():
    rng = random.Random(19)
    for _ in range(10):
        p = rng.randint(2, 6)
        rho = Fraction(rng.randint(1000, 3000), 6000)
        ball = d_strip(p, rho, rho, 256)
        assert abs(float(ball.mid) - float(quadrature(p, mpmath.mpf(rho.numerator) / rho.denominator))) <= 1e-9


def test_strip_at_sixth_is_positive_for_p2():
    ball = d_strip(2, Fraction(1, 6), Fraction(1, 6), 256)
    assert ball.lower() > 0
    assert d_strip(2, Fraction(0), Fraction(0), 256).contains(0)


def test_strip_domain_checked():
    with pytest.raises(BallError):
        d_strip(2, Fraction(1, 3), Fraction(2, 3))


@pytest.mark.parametrize("p", range(2, 7))
def test_cell_coefficients_match_definition(p):
    for k in range(1, 60):
        u = Fraction(k, 120)
        alpha, beta = cell_coefficients(p, u)
        frac = p * u - (p * u).numerator // (p * u).denominator
        assert alpha + beta * u == (1 if u < Fraction(1, 6) else 0) + u - frac


def test_box_atoms_signs():
    atoms = box_atoms(2, 2)
    assert (Fraction(0), 1) in atoms and (Fraction(1, 6), -1) in atoms
    assert (Fraction(1, 2), 1) in atoms and (Fraction(1, 3), -1) in atoms


def test_box_below_sixth_uses_only_origin_atom():
    lo, hi = Fraction(1, 20), Fraction(1, 10)
    val = k_box(2, 2, lo, hi, PREC)
    expected = 4 * (1 - mpmath.cos(2 * mpmath.pi * mpmath.mpf(3) / 40)) ** 2
    assert val.lower() <= expected <= val.upper()


def test_bisect_trivial_cases():
    one = lambda lo, hi: Ball(1, 0, PREC)  # noqa: E731
    res = certify_bisect(one, [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(2))], prec=PREC)
    assert res.passed and res.boxes == 2 and res.max_depth == 0
    with pytest.raises(CertificationFailure):
        certify_bisect(lambda lo, hi: Ball(-1, 0, PREC), [(Fraction(0), Fraction(1))], max_depth=3, prec=PREC)


@pytest.mark.parametrize("family", [2, (2, 2), (3, 4)], ids=str)
def test_selected_families_certify(family):
    res = run_family(family, 256, 20)
    assert res.passed and res.min_margin > 0 and res.max_depth <= 20
    assert matching_digits(res.min_margin, REFERENCE_LOG[family][2]) >= 1


def test_family_lists_have_expected_sizes():
    assert len(STRIP_FAMILIES) == 5 and len(BOX_FAMILIES) == 15
    assert set(REFERENCE_LOG) == set(STRIP_FAMILIES) | set(BOX_FAMILIES)
