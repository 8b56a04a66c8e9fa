from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from spectra_cert import spectral as sp
from spectra_cert.enumerate import enumerate_connected
from spectra_cert.exact_linalg import identity, inverse
from spectra_cert.graph import ContractViolation, Graph
from spectra_cert.matching import (
    deletion_ratio_evidence,
    gram_charpoly,
    matching_poly,
    matching_poly_brute,
    path_poly,
    shifted_weighted_graph,
    theta_interpolation,
)
from spectra_cert.poly import RatPoly, real_rooted_negative
from spectra_cert.transforms import TreeShiftStep, all_tree_shifts, apply_tree_shift, cycle, path, spider, star

X = RatPoly.x()


def random_weighted_tree(rng: random.Random, n: int) -> Graph:
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    weights = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in edges]
    return Graph.from_edges(n, edges, weights)


def test_single_weighted_edge():
    g = Graph.from_edges(2, [(0, 1)], [Fraction(2, 3)])
    assert matching_poly(g) == RatPoly([1, Fraction(2, 3)])
    assert gram_charpoly(g) == RatPoly([1, Fraction(2, 3)])


@pytest.mark.parametrize("g, coeffs", [(path(4), [1, 3, 1]), (star(4), [1, 3]), (cycle(4), [1, 4, 2]), (path(1), [1])])
def test_matching_poly_examples(g, coeffs):
    assert matching_poly(g) == RatPoly(coeffs)
    assert matching_poly_brute(g) == RatPoly(coeffs)


def test_negative_weight_rejected():
    with pytest.raises(Exception):
        matching_poly(Graph.from_edges(2, [(0, 1)], [Fraction(-1)]))


def test_path_poly_conventions():
    assert path_poly(-1) == RatPoly()
    assert path_poly(0) == RatPoly([1])
    assert path_poly(1) == RatPoly([1])
    assert path_poly(4) == RatPoly([1, 3, 1])


@pytest.mark.parametrize("a", range(1, 11))
def test_path_concatenation_identity(a):
    for b in range(1, 11):
        assert path_poly(a + b) == path_poly(a) * path_poly(b) + X * path_poly(a - 1) * path_poly(b - 1)


def test_matching_poly_is_multiplicative_over_components():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)])
    assert matching_poly(g) == path_poly(3) * path_poly(4)


@pytest.mark.parametrize("n", range(1, 9))
def test_gram_charpoly_equals_matching_poly_on_trees(n):
    for tree in enumerate_connected(n, "trees"):
        assert gram_charpoly(tree) == matching_poly(tree) == matching_poly_brute(tree)


def test_gram_charpoly_on_weighted_forests():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 9)
        edges = [(rng.randrange(v), v) for v in range(1, n) if rng.random() < 0.8]
        f = Graph.from_edges(n, edges, [Fraction(rng.randint(1, 5), rng.randint(1, 5)) for _ in edges])
        assert gram_charpoly(f) == matching_poly(f)


def test_gram_charpoly_rejects_cycles():
    with pytest.raises(ContractViolation):
        gram_charpoly(cycle(4))


def test_real_rooted_negative_examples():
    assert real_rooted_negative(RatPoly([1, 3, 1]))
    assert not real_rooted_negative(RatPoly([1, 0, 1]))
    with pytest.raises(ValueError):
        real_rooted_negative(RatPoly())


def test_weighted_shift_polynomials_are_real_rooted():
    rng = random.Random(17)
    checked = 0
    while checked < 200:
        tree = random_weighted_tree(rng, rng.randint(4, 9))
        unit = Graph.from_edges(tree.n, tree.edges)
        steps = all_tree_shifts(unit)
        if not steps:
            continue
        step = rng.choice(steps)
        for theta in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
            # unit weights on the arms keep the step meaningful; other edges keep random weights
            arm_free = Graph.from_edges(tree.n, tree.edges, [
                Fraction(1) if set(e) & (set(step.arm_a) | set(step.arm_b)) else w
                for e, w in zip(tree.edges, tree.weights)
            ])
            assert real_rooted_negative(matching_poly(shifted_weighted_graph(arm_free, step, theta)))
        checked += 1


def test_theta_interpolation_on_claw():
    claw = star(4)
    step = TreeShiftStep(0, (1,), (2,))
    interp = theta_interpolation(claw, step)
    assert interp.identity_holds
    assert interp.poly.at_theta(0) == matching_poly(claw)
    assert interp.poly.at_theta(1) == matching_poly(apply_tree_shift(claw, step))
    gain = interp.poly.at_theta(1) - interp.poly.at_theta(0)
    assert gain[0] == gain[1] == 0 and gain.nonneg_coeffs() and not gain.is_zero()


def test_theta_interpolation_degree_two_branch_is_constant():
    p3 = spider([1, 1])
    interp = theta_interpolation(p3, TreeShiftStep(0, (1,), (2,)))
    assert interp.identity_holds
    assert interp.derivative.rows == () or all(r.is_zero() for r in interp.derivative.rows)


@pytest.mark.parametrize("legs", [(1, 1, 1), (2, 1, 1), (2, 2, 1), (3, 2, 2), (1, 1, 1, 1)])
def test_theta_half_matches_half_weighted_graph(legs):
    tree = spider(list(legs))
    for step in all_tree_shifts(tree):
        interp = theta_interpolation(tree, step)
        assert interp.identity_holds
        half = Fraction(1, 2)
        assert interp.poly.at_theta(half) == matching_poly(shifted_weighted_graph(tree, step, half))


@pytest.mark.parametrize("n", range(4, 10))
def test_one_shift_monotonicity(n):
    for tree in enumerate_connected(n, "trees"):
        for step in all_tree_shifts(tree):
            gain = matching_poly(apply_tree_shift(tree, step)) - matching_poly(tree)
            assert gain.nonneg_coeffs() and gain[0] == 0 and gain[1] == 0


@pytest.mark.parametrize("n", range(1, 11))
def test_path_is_coefficientwise_maximal(n):
    top = path_poly(n)
    for tree in enumerate_connected(n, "trees"):
        assert (top - matching_poly(tree)).nonneg_coeffs()


@pytest.mark.parametrize("n", range(2, 10))
def test_roots_match_gram_eigenvalues(n):
    for tree in enumerate_connected(n, "trees"):
        poly = matching_poly(tree)
        mu = sorted(v for v in sp.mu_values(tree).values if v > 1e-9)
        if poly.degree == 0:
            assert not mu
            continue
        roots = np.roots([float(c) for c in reversed(poly.coeffs)])
        from_roots = sorted(-1 / r.real for r in roots)
        assert np.allclose(from_roots, mu, atol=1e-8)


def path_gram(n: int) -> list[list[int]]:
    """Gram matrix on the side of the path containing the first vertex."""
    side = list(range(0, n, 2))
    return [[sum(1 for x in range(n) if abs(x - a) == 1 and abs(x - b) == 1) for b in side] for a in side]


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(1), Fraction(7, 2)])
def test_endpoint_resolvent_identity(n, x):
    gram = path_gram(n)
    k = len(gram)
    shifted = [[identity(k)[i][j] + x * gram[i][j] for j in range(k)] for i in range(k)]
    assert inverse(shifted)[0][0] == path_poly(n - 1)(x) / path_poly(n)(x)


def test_deletion_ratio_examples():
    assert deletion_ratio_evidence(path(3), [0]).passed
    ev = deletion_ratio_evidence(path(5), [0, 4])
    assert ev.passed and ev.min_coefficient >= -1e-10
    empty = deletion_ratio_evidence(path(3), [])
    assert empty.passed and empty.coefficients == (1.0,)
    with pytest.raises(ContractViolation):
        deletion_ratio_evidence(path(4), [0, 1])


def stoploss_from_poly(poly: RatPoly, t: float) -> float:
    roots = np.roots([float(c) for c in reversed(poly.coeffs)])
    return sum(max(-1 / r.real - t, 0.0) ** 2 for r in roots)


@pytest.mark.parametrize("n", range(4, 8))
def test_stoploss_monotone_along_theta(n):
    thetas = [Fraction(k, 10) for k in range(11)]
    ts = [k / 4 for k in range(21)]
    for tree in enumerate_connected(n, "trees"):
        for step in all_tree_shifts(tree):
            polys = [matching_poly(shifted_weighted_graph(tree, step, th)) for th in thetas]
            for t in ts:
                vals = [stoploss_from_poly(p, t) for p in polys]
                assert vals[-1] <= vals[0] + 1e-8
                assert all(b <= a + 1e-7 for a, b in zip(vals, vals[1:]))
