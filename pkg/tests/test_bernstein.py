from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from spectra_cert.bernstein import (
    Q5,
    Q_STAR,
    bernstein_coeffs,
    certify_nonneg,
    exact_min_on_samples,
    line_graph_rows,
    line_model_poly,
    line_model_walk_counts,
    moment_poly,
    run_envelope_certificates,
    scalar_envelope_rows,
)
from spectra_cert.graph import GraphError
from spectra_cert.poly import RatPoly

T = RatPoly.x()
rationals = st.fractions(-5, 5, max_denominator=7)


def bernstein_sum(coeffs, lo, hi, t):
    """Evaluate ``sum b_k C(m,k) x^k (1-x)^(m-k)`` at the point ``t`` of ``[lo, hi]``."""
    m = len(coeffs) - 1
    x = (t - lo) / (hi - lo)
    return sum(b * comb(m, k) * x**k * (1 - x) ** (m - k) for k, b in enumerate(coeffs))


@given(st.lists(rationals, min_size=1, max_size=6), rationals, st.fractions(1, 4, max_denominator=5),
       st.integers(0, 3))
def test_bernstein_basis_reconstructs_polynomial(coeffs, lo, width, extra):
    p = RatPoly(coeffs)
    hi = lo + width
    m = max(p.degree, 0) + extra
    b = bernstein_coeffs(p, lo, hi, m)
    assert len(b) == m + 1
    for k in range(5):
        t = lo + width * Fraction(k, 4)
        assert bernstein_sum(b, lo, hi, t) == p(t)


def test_constant_and_identity_examples():
    assert bernstein_coeffs(RatPoly([1]), 2, 5, 3) == [1, 1, 1, 1]
    assert bernstein_coeffs(T, 0, 1, 1) == [0, 1]
    g0 = Fraction(7, 2) - 2 * T
    assert bernstein_coeffs(g0, 0, Fraction(3, 2), 1) == [Fraction(7, 2), Fraction(1, 2)]


def test_bad_degree_and_interval_rejected():
    with pytest.raises(GraphError):
        bernstein_coeffs(T**2, 0, 1, 1)
    with pytest.raises(GraphError):
        bernstein_coeffs(T, 1, 1)


def test_negative_constant_fails_certification():
    cert = certify_nonneg(RatPoly([-1]), 0, 1)
    assert not cert.passed and cert.min_coeff == -1


def test_named_rows_meet_bounds():
    rows = {name: (p, lo, hi, bound) for name, p, lo, hi, bound in scalar_envelope_rows()}
    g2 = rows["G2"]
    assert certify_nonneg(g2[0], g2[1], g2[2], 5).min_coeff >= 459
    f1 = rows["F1"]
    assert certify_nonneg(f1[0], f1[1], f1[2], 34).min_coeff >= Fraction(10) ** 20
    f2c = rows["F2c"]
    assert (f2c[1], f2c[2]) == (Fraction(75, 19), Fraction(151, 38))
    assert certify_nonneg(*f2c[:3]).min_coeff >= Fraction(10) ** 9


@pytest.mark.parametrize("row", scalar_envelope_rows(), ids=lambda r: r[0])
def test_scalar_rows_sample_soundness_and_elevation(row):
    name, p, lo, hi, bound = row
    cert = certify_nonneg(p, lo, hi, bound=bound, name=name)
    assert cert.passed
    assert exact_min_on_samples(p, lo, hi) >= 0
    assert min(bernstein_coeffs(p, lo, hi, p.degree + 1)) >= 0


@pytest.mark.parametrize("row", line_graph_rows(), ids=lambda r: r[0])
def test_line_graph_rows_strictly_positive(row):
    name, p, lo, hi = row
    assert certify_nonneg(p, lo, hi, bound=0, name=name, strict=True).passed
    assert exact_min_on_samples(p, lo, hi) > 0
    assert min(bernstein_coeffs(p, lo, hi, p.degree + 1)) > 0


def test_moment_poly_examples():
    assert moment_poly(7, 1) == 4 * T + 3
    assert moment_poly(7, 5) == Q5
    for n in (3, 4, 5, 6):
        assert (moment_poly(n, 5) - Q5).nonneg_coeffs()


@pytest.mark.parametrize("n", range(3, 11))
@pytest.mark.parametrize("j", range(6))
def test_moment_poly_coefficients_are_walk_counts(n, j):
    p = moment_poly(n, j)
    assert all(c >= 0 and c.denominator == 1 for c in p.coeffs)


def test_line_model_examples():
    assert line_model_poly(6) == Q_STAR
    assert line_model_walk_counts(6) == [2, 3, 8, 24, 76, 249]
    for length in (2, 3, 4, 5):
        assert (line_model_poly(length) - Q_STAR).nonneg_coeffs()
    with pytest.raises(Exception):
        line_model_poly(7)


def test_full_certificate_report_passes():
    report = run_envelope_certificates()
    assert report.passed, report.failures()
    assert len(report.certificates) == 14
    names = {i.name for i in report.identities}
    assert {"A(3)=1245", "B(3)=3677", "h' numerator", "D lower bound > 3000"} <= names
