from __future__ import annotations

import math
import random
from fractions import Fraction
from math import comb

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import graphs, trees
from spectra_cert import spectral as sp
from spectra_cert.eigen import eig_sym, eig_sym_mp
from spectra_cert.transforms import bipartition_of, complete, complete_bipartite, cycle, line_graph, path, star


def adjacency(g):
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1.0
    return a


def test_triangle_three_energy():
    assert float(sp.p_energy(complete(3), 3)) == pytest.approx(10.0, abs=1e-12)
    assert float(sp.p_energy(path(3), 3)) == pytest.approx(2 * 2 ** 1.5, abs=1e-12)


@given(graphs(max_n=9))
def test_second_energy_counts_edges(g):
    e2 = sp.p_energy(g, 2)
    assert abs(float(e2) - 2 * g.m) <= 4 * e2.err + 1e-12


@given(graphs(max_n=9))
def test_fourth_energy_closed_walk_formula(g):
    expected = 2 * g.m + 4 * sum(comb(d, 2) for d in g.degrees()) + 8 * sp.count_four_cycles(g)
    assert sp.e4_closed_walks(g) == expected
    assert float(sp.p_energy(g, 4)) == pytest.approx(expected, abs=1e-8)


@given(graphs(max_n=8))
def test_estimate_error_encloses_high_precision_value(g):
    p = 2.5
    est = sp.p_energy(g, p)
    vals, _ = eig_sym_mp(adjacency(g).tolist(), 40)
    exact = sum(abs(v) ** mpmath.mpf(p) for v in vals)
    assert abs(float(est) - float(exact)) <= est.err + 1e-12


@pytest.mark.parametrize("m", [1, 2, 3, 7, 20, 35, 50])
def test_path_closed_form_matches_eigensolver(m):
    mu = sorted(sp.path_mu_closed_form(m), reverse=True)
    numeric = sp.mu_values(path(m))
    assert len(mu) == len(numeric.values)
    assert max((abs(a - b) for a, b in zip(mu, numeric.values)), default=0.0) <= 1e-10
    lam = sorted(2 * math.cos(math.pi * j / (m + 1)) for j in range(1, m + 1))
    assert np.allclose(sorted(sp.adjacency_spectrum(path(m)).values), lam, atol=1e-10)


@pytest.mark.parametrize("half", [2, 3, 5, 8, 15, 30])
def test_even_cycle_closed_form(half):
    mu = sp.even_cycle_mu_closed_form(half)
    numeric = sp.mu_values(cycle(2 * half))
    assert np.allclose(mu, numeric.values, atol=1e-10)


@given(graphs(max_n=9, connected=True))
def test_bipartite_spectrum_is_symmetric(g):
    assume(bipartition_of(g) is not None)
    vals = sp.adjacency_spectrum(g).values
    assert np.allclose(sorted(vals), sorted(-v for v in vals), atol=1e-9)


def test_stoploss_cycle_four_against_path_four():
    assert float(sp.stoploss(cycle(4), 0.0)) == pytest.approx(16.0)
    assert float(sp.stoploss(path(4), 0.0)) == pytest.approx(7.0)


@pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 0.9, 1.0, 2.0])
def test_stoploss_of_single_edge_splice(t):
    gain = float(sp.stoploss(path(2), t))
    assert gain == pytest.approx(max(1 - t, 0.0) ** 2, abs=1e-12)
    assert gain <= max(4 - t, 0) ** 2 - max(3 - t, 0) ** 2


@given(graphs(max_n=8, connected=True), st.sampled_from([0, Fraction(1, 4), Fraction(3, 2), 2, Fraction(13, 4), 5]))
def test_exact_stoploss_agrees_with_numeric(g, t):
    bip = bipartition_of(g)
    assume(bip is not None and g.m > 0)
    exact = sp.exact_stoploss(sp.gram_integer(g, bip), t)
    numeric = sp.stoploss(g, float(t), bip)
    if exact is not None:
        assert abs(float(exact) - float(numeric)) <= 4 * numeric.err + 1e-9


def test_exact_stoploss_declines_when_irrational_roots_straddle():
    assert sp.exact_stoploss(sp.gram_integer(path(6), bipartition_of(path(6))), 1) is None


@given(graphs(max_n=8, connected=True), st.sampled_from(["1/16", "1/4", "1", "4", "16"]))
def test_r1_determinant_form(g, x):
    assume(bipartition_of(g) is not None and g.m > 0)
    xq = Fraction(x)
    via_det = float(xq) * g.m - math.log(float(sp.r1_det(g, xq)))
    mu = sp.mu_values(g)
    via_spectrum = sum(sp.r1_scalar(float(xq) * m) for m in mu.values)
    assert via_det == pytest.approx(via_spectrum, rel=1e-9, abs=1e-9)
    assert float(sp.r1(g, xq)) == pytest.approx(via_det, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("g", [star(5), cycle(6), complete_bipartite(2, 3)])
def test_r1_small_x_expansion_sign(g):
    n = g.n
    x = Fraction(1, 100)
    diff = float(sp.r1(g, x)) - float(sp.r1(path(n), x))
    lead = float(x) ** 2 * (float(sp.stoploss(g, 0.0)) - float(sp.stoploss(path(n), 0.0))) / 2
    assert diff > 0 and lead > 0
    assert diff == pytest.approx(lead, rel=0.2)


@pytest.mark.parametrize("n", [2, 5, 9])
def test_r1_path_equals_itself(n):
    assert float(sp.r1(path(n), 1)) == float(sp.r1(path(n), 1))


@given(trees(min_n=2, max_n=10))
def test_laplacian_trace_is_twice_edges_on_trees(t):
    for matrix in ("L", "Q"):
        val = sp.lap_functional(t, "power", matrix=matrix, alpha=1.0)
        assert float(val) == pytest.approx(2 * (t.n - 1), abs=1e-9)


@given(graphs(max_n=8, connected=True), st.sampled_from([2, 2.5, 3, 4, 5]))
def test_psi_matches_exact_signless_trace(g, t):
    exact = sp.exact_stoploss(sp.laplacian_matrix(g, True), Fraction(str(t)))
    if exact is not None:
        assert float(sp.psi(g, t)) == pytest.approx(float(exact), abs=1e-8)


def test_line_graph_of_claw_positive_square_energy():
    lg = line_graph(star(4))
    assert float(sp.p_energy_signed(lg, 2).positive) == pytest.approx(4.0)
    assert float(sp.p_energy_signed(path(3), 2).positive) == pytest.approx(2.0)


@given(graphs(min_n=2, max_n=8, connected=True), st.sampled_from([2, 3, 4]))
def test_line_graph_shift_identity(g, p):
    assume(g.m > 0)
    direct = sp.p_energy_signed(line_graph(g), p).positive
    q = sp.q_spectrum(g)
    shifted = sum(max(v - 2, 0.0) ** p for v in q.values)
    assert float(direct) == pytest.approx(shifted, abs=1e-8)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("alpha", [1.1, 1.3, 1.5, 1.7, 1.9])
def test_mellin_identity(t, alpha):
    lhs, rhs = sp.mellin_check(t, alpha)
    assert rhs == pytest.approx(lhs, abs=1e-6, rel=1e-6)


def random_update(rng: random.Random):
    k = rng.randint(1, 6)
    b_mat = np.array([[rng.randint(0, 1) for _ in range(k + 1)] for _ in range(k)], dtype=float)
    m = b_mat @ b_mat.T
    b = np.array([rng.randint(0, 1) for _ in range(k)], dtype=float)
    return m, b


def test_rank_one_trace_formula_on_random_updates():
    rng = random.Random(7)
    for _ in range(100):
        m, b = random_update(rng)
        t = rng.choice([0.0, 0.5, 1.0, 2.5, 4.0])
        gain = sp.rank_one_gain(m, b, t, tol=1e-8)
        eset, s0, s1 = sp.shift_intervals(m, b)
        assert float(gain) == pytest.approx(2 * eset.j(t), abs=1e-8)


def test_shift_intervals_interlace_and_measure_trace():
    rng = random.Random(11)
    for _ in range(100):
        m, b = random_update(rng)
        eset, s0, s1 = sp.shift_intervals(m, b)
        a, c = s0.values, s1.values
        for i in range(len(a)):
            assert c[i] >= a[i] - 1e-9
            if i + 1 < len(a):
                assert a[i] >= c[i + 1] - 1e-9
        assert eset.total_length == pytest.approx(float(b @ b), abs=1e-8)


def test_shift_intervals_reject_indefinite_matrix():
    with pytest.raises(Exception):
        sp.shift_intervals(np.diag([-1.0, 2.0]), np.array([1.0, 0.0]))


@pytest.mark.parametrize("u, v, t, expected", [(3, 4, 0, Fraction(7, 2)), (1, 4, 0, Fraction(15, 2)), (3, 4, Fraction(7, 2), Fraction(1, 8)), (3, 4, 5, 0)])
def test_interval_integral_closed_form(u, v, t, expected):
    assert sp.i_of(Fraction(u), Fraction(v), Fraction(t)) == expected


@given(st.fractions(0, 6, max_denominator=8), st.fractions(0, 3, max_denominator=8), st.fractions(0, 8, max_denominator=8))
def test_interval_integral_matches_quadrature(u, width, t):
    v = u + width
    value = float(sp.i_of(u, v, t))
    quad = float(mpmath.quad(lambda y: max(y - float(t), 0), [float(u), float(t) if u < t < v else float(u), float(v)]))
    assert value == pytest.approx(quad, abs=1e-9)


def test_eigensolver_error_bound_is_honest():
    rng = np.random.default_rng(3)
    a = rng.integers(-3, 4, size=(8, 8)).astype(float)
    a = a + a.T
    spec = eig_sym(a)
    vals, _ = eig_sym_mp(a.tolist(), 50)
    assert max(abs(float(x) - y) for x, y in zip(vals, spec.values)) <= spec.err
