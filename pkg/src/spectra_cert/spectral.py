"""Eigenvalue functionals of graphs.

Every numeric functional returns an :class:`Estimate`, a ``float`` that also
carries ``err``: an upper bound on its distance from the exact value given
the certified eigenvalue bound.  The bound uses monotonicity: if ``F`` is
nondecreasing and each eigenvalue is known within ``e``, then
``sum F(lam)`` is off by at most ``sum F(lam + e) - F(lam - e)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np

from .eigen import SpectralData, eig_sym
from .exact_linalg import charpoly, det
from .poly import RatPoly, count_real_roots, squarefree_part
from .graph import Graph, GraphError
from .quadrature import adaptive_simpson
from .transforms import Bipartition, bipartition_of

TARGET_ERR = 1e-11


class Estimate(float):
    """A float with an attached absolute error bound ``err``."""

    err: float

    def __new__(cls, value: float, err: float = 0.0):
        obj = super().__new__(cls, value)
        obj.err = float(err)
        return obj

    def __repr__(self) -> str:
        return f"Estimate({float(self)!r}, err={self.err:.2e})"


class ConsistencyError(ArithmeticError):
    """Two independent evaluations of the same quantity disagree beyond tolerance."""


def _monotone_sum(values: Iterable[float], e: float, f: Callable[[float], float]) -> Estimate:
    total = 0.0
    err = 0.0
    for v in values:
        fv = f(v)
        total += fv
        err += f(v + e) - f(v - e)
    # floating rounding of the summation itself
    err += 1e-15 * max(abs(total), 1.0) * 4
    return Estimate(total, err)


# -- matrices --------------------------------------------------------------------


def adjacency_matrix(g: Graph) -> list[list[Fraction]]:
    return g.adjacency()


def laplacian_matrix(g: Graph, signless: bool = False) -> list[list[int]]:
    """``L = D - A`` or, with ``signless``, ``Q = D + A`` (unweighted)."""
    s = 1 if signless else -1
    m = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        m[u][v] = m[v][u] = s
    for v in range(g.n):
        m[v][v] = g.degree(v)
    return m


def biadjacency(g: Graph, bip: Bipartition) -> tuple[list[list[float]], list[int], list[int]]:
    """Rows = left side, columns = right side, entries ``sqrt(weight)``."""
    bip.check(g)
    left = sorted(bip.left)
    right = sorted(bip.right)
    li = {v: i for i, v in enumerate(left)}
    ri = {v: j for j, v in enumerate(right)}
    b = [[0.0] * len(right) for _ in left]
    for u, v, w in g.weighted_edges():
        if u in li:
            b[li[u]][ri[v]] = math.sqrt(w)
        else:
            b[li[v]][ri[u]] = math.sqrt(w)
    return b, left, right


def gram_integer(g: Graph, bip: Bipartition) -> list[list[int]]:
    """``B^T B`` on the smaller side, for unweighted graphs (exact integers)."""
    if g.weights is not None:
        raise GraphError("exact Gram matrix requires an unweighted graph")
    bip.check(g)
    side = sorted(bip.right) if len(bip.right) < len(bip.left) else sorted(bip.left)
    nb = [g.neighbors(v) for v in side]
    return [[len(nb[i] & nb[j]) for j in range(len(side))] for i in range(len(side))]


# -- spectra ----------------------------------------------------------------------


@lru_cache(maxsize=200_000)
def adjacency_spectrum(g: Graph) -> SpectralData:
    return eig_sym(g.adjacency_float() if g.weights is None else g.adjacency(), TARGET_ERR)


def lap_spectrum(g: Graph) -> SpectralData:
    return eig_sym(np.asarray(laplacian_matrix(g), dtype=float), TARGET_ERR)


def q_spectrum(g: Graph) -> SpectralData:
    return eig_sym(np.asarray(laplacian_matrix(g, signless=True), dtype=float), TARGET_ERR)


def mu_values(g: Graph, bip: Bipartition | None = None) -> SpectralData:
    """Eigenvalues of the Gram matrix of the biadjacency matrix (smaller side), descending, zeros kept."""
    if bip is None:
        bip = bipartition_of(g)
        if bip is None:
            raise GraphError("mu-values need a bipartite graph")
    bip.check(g)
    if g.weights is None:
        gram = np.asarray(gram_integer(g, bip), dtype=float)
    else:
        b, _, _ = biadjacency(g, bip)
        bm = np.asarray(b, dtype=float).reshape(len(bip.left), len(bip.right))
        gram = bm.T @ bm if bm.shape[1] <= bm.shape[0] else bm @ bm.T
        gram = 0.5 * (gram + gram.T)
    if gram.size == 0:
        return SpectralData((), 0.0)
    return eig_sym(gram, TARGET_ERR)


def path_mu_closed_form(m: int) -> list[float]:
    """Nonzero squared singular values of the path on ``m`` vertices: ``4 cos^2(pi i/(m+1))``."""
    return [4.0 * math.cos(math.pi * i / (m + 1)) ** 2 for i in range(1, m // 2 + 1)]


def even_cycle_mu_closed_form(m: int) -> list[float]:
    """Squared singular values of ``C_{2m}``: ``4 cos^2(pi j/m)`` for ``j = 0..m-1``."""
    return sorted((4.0 * math.cos(math.pi * j / m) ** 2 for j in range(m)), reverse=True)


# -- energies ------------------------------------------------------------------------


def _abs_pow(p: float) -> Callable[[float], float]:
    return lambda x: abs(x) ** p if x != 0 or p > 0 else 1.0


def p_energy(g: Graph, p: float) -> Estimate:
    """Sum of ``|lambda|^p`` over the adjacency spectrum."""
    if p < 0:
        raise GraphError("p must be non-negative")
    spec = adjacency_spectrum(g)
    mags = [abs(x) for x in spec.values]
    e = spec.err

    def f(x: float) -> float:
        return max(x, 0.0) ** p if p > 0 else 1.0

    return _monotone_sum(mags, e, f)


def p_energy_from_values(values: Sequence[float], err: float, p: float) -> Estimate:
    return _monotone_sum([abs(x) for x in values], err, lambda x: max(x, 0.0) ** p)


@dataclass(frozen=True)
class SignedEnergy:
    positive: Estimate
    negative: Estimate
    flagged: int  # eigenvalues within the error bound of zero (treated as zero)


def signed_from_values(values: Sequence[float], err: float, p: float) -> SignedEnergy:
    pos = [x for x in values if x > err]
    neg = [-x for x in values if x < -err]
    flagged = len(values) - len(pos) - len(neg)

    def f(x: float) -> float:
        return max(x, 0.0) ** p

    ep = _monotone_sum(pos, err, f)
    en = _monotone_sum(neg, err, f)
    extra = flagged * f(err)
    return SignedEnergy(Estimate(ep, ep.err + extra), Estimate(en, en.err + extra), flagged)


def p_energy_signed(g: Graph, p: float) -> SignedEnergy:
    """Positive and negative p-energies; eigenvalues within ``err`` of zero count as zero."""
    if p < 0:
        raise GraphError("p must be non-negative")
    spec = adjacency_spectrum(g)
    return signed_from_values(spec.values, spec.err, p)


def e4_closed_walks(g: Graph) -> int:
    """Exact fourth spectral moment ``2m + 4 sum C(d,2) + 8 C4(G)`` via closed-walk counting."""
    m = g.m
    deg = g.degrees()
    pairs = sum(d * (d - 1) // 2 for d in deg)
    return 2 * m + 4 * pairs + 8 * count_four_cycles(g)


def count_four_cycles(g: Graph) -> int:
    """Number of 4-cycles (as subgraphs): sum over vertex pairs of C(common neighbours, 2), halved."""
    total = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = len(g.neighbors(u) & g.neighbors(v))
            total += c * (c - 1) // 2
    return total // 2


# -- stop-loss, R1 and Psi ---------------------------------------------------------------


def stoploss_values(values: Sequence[float], err: float, t: float) -> Estimate:
    return _monotone_sum(values, err, lambda x: max(x - t, 0.0) ** 2)


def stoploss(g: Graph, t: float, bip: Bipartition | None = None) -> Estimate:
    """``sum (mu - t)_+^2`` over the mu-values of a bipartite graph."""
    if t < 0:
        raise GraphError("stop-loss level t must be non-negative")
    mu = mu_values(g, bip)
    return stoploss_values(mu.values, mu.err, t)


def _integer_roots(cp: RatPoly, bound: int) -> tuple[dict[int, int], RatPoly]:
    """Integer roots in ``[-bound, bound]`` with multiplicities, and the deflated rest."""
    roots: dict[int, int] = {}
    rest = cp
    for k in range(-bound, bound + 1):
        linear = RatPoly([-k, 1])
        while rest.degree > 0 and rest(Fraction(k)) == 0:
            rest = rest // linear
            roots[k] = roots.get(k, 0) + 1
    return roots, rest


def _power_sums(p: RatPoly, count: int) -> list[Fraction]:
    """Newton power sums ``p_1 .. p_count`` of the roots of ``p`` (with multiplicity)."""
    n = p.degree
    lead = p[n]
    # elementary symmetric functions from the monic coefficients
    e = [Fraction(1)] + [(-1) ** k * p[n - k] / lead for k in range(1, n + 1)]
    sums: list[Fraction] = []
    for k in range(1, count + 1):
        total = (-1) ** (k - 1) * k * e[k] if k <= n else Fraction(0)
        for i in range(1, k):
            if i <= n:
                total += (-1) ** (i - 1) * e[i] * sums[k - i - 1]
        sums.append(total)
    return sums


@lru_cache(maxsize=8192)
def _split_charpoly(rows: tuple[tuple[Fraction, ...], ...]) -> tuple[dict[int, int], RatPoly, RatPoly]:
    bound = math.ceil(max(sum(abs(x) for x in row) for row in rows))
    roots, rest = _integer_roots(charpoly([list(r) for r in rows]), bound)
    return roots, rest, squarefree_part(rest) if rest.degree > 0 else rest


def exact_stoploss(matrix: Sequence[Sequence], t) -> Fraction | None:
    """Exact ``sum (lambda - t)_+^2`` over the eigenvalues of a symmetric rational matrix.

    Integer eigenvalues are split off from the characteristic polynomial; the
    remaining eigenvalues contribute exactly when Sturm counting shows they
    all lie on one side of ``t`` (the contribution is then ``0`` or a power-sum
    polynomial in ``t``).  Returns ``None`` when the remainder straddles ``t``.
    """
    t = Fraction(str(t)) if isinstance(t, float) else Fraction(t)
    if not len(matrix):
        return Fraction(0)
    roots, rest, core = _split_charpoly(tuple(tuple(Fraction(x) for x in row) for row in matrix))
    total = sum(((k - t) ** 2 * mult for k, mult in roots.items() if k > t), Fraction(0))
    if rest.degree <= 0:
        return total
    if count_real_roots(core, t, None) == 0:
        return total
    if count_real_roots(core, None, t) == 0:
        p1, p2 = _power_sums(rest, 2)
        return total + p2 - 2 * t * p1 + t * t * rest.degree
    return None


def r1_scalar(y: float) -> float:
    return y - math.log1p(y)


def r1_det(g: Graph, x: Fraction, bip: Bipartition | None = None) -> Fraction:
    """Exact ``det(I + x B^T B)`` for rational ``x``."""
    if bip is None:
        bip = bipartition_of(g)
        if bip is None:
            raise GraphError("R1 needs a bipartite graph")
    gram = gram_integer(g, bip)
    k = len(gram)
    x = Fraction(x)
    mat = [[Fraction(int(i == j)) + x * gram[i][j] for j in range(k)] for i in range(k)]
    return det(mat) if k else Fraction(1)


def r1(g: Graph, x: Fraction | int | str, bip: Bipartition | None = None) -> Estimate:
    """``x |E| - log det(I + x B^T B)`` with the determinant computed exactly."""
    x = Fraction(x)
    if x <= 0:
        raise GraphError("R1 needs x > 0")
    d = r1_det(g, x, bip)
    with mpmath.workdps(40):
        val = mpmath.mpf(x.numerator) / x.denominator * g.m - mpmath.log(mpmath.mpf(d.numerator) / d.denominator)
        return Estimate(float(val), abs(float(val)) * 1e-15 + 1e-300)


def psi(g: Graph, t: float) -> Estimate:
    """``sum (lambda(Q) - t)_+^2`` over the signless Laplacian spectrum, for ``t >= 2``."""
    if t < 2:
        raise GraphError("Psi_t is defined for t >= 2")
    spec = q_spectrum(g)
    return stoploss_values(spec.values, spec.err, t)


def psi_from_spectrum(spec: SpectralData, t: float) -> Estimate:
    return stoploss_values(spec.values, spec.err, t)


# -- Laplacian-type functionals ---------------------------------------------------------------


def lap_functional(g: Graph, kind: str, *, matrix: str = "L", alpha: float = 1.0, theta: float = 1.0,
                   a: float = 0.0, p: float = 2.0) -> Estimate:
    """Spectral sums over ``L(G)`` or ``Q(G)``.

    ``kind`` is one of ``power`` (sum lambda^alpha, alpha >= 1), ``estrada``
    (sum e^{theta lambda}), ``resolvent`` (sum 1/(n+1-lambda) for L,
    1/(2n-1-lambda) for Q) and ``threshold`` (sum (lambda-a)_+^p, a >= 0, p >= 2).
    """
    spec = lap_spectrum(g) if matrix == "L" else q_spectrum(g)
    return spectrum_functional(spec, g.n, kind, matrix=matrix, alpha=alpha, theta=theta, a=a, p=p)


def spectrum_functional(spec: SpectralData, n: int, kind: str, *, matrix: str = "L", alpha: float = 1.0,
                        theta: float = 1.0, a: float = 0.0, p: float = 2.0) -> Estimate:
    vals = [max(v, 0.0) for v in spec.values]
    e = spec.err
    if kind == "power":
        if alpha < 1:
            raise GraphError("power functional needs alpha >= 1")
        return _monotone_sum(vals, e, lambda x: max(x, 0.0) ** alpha)
    if kind == "estrada":
        if theta <= 0:
            raise GraphError("Estrada parameter must be positive")
        return _monotone_sum(vals, e, lambda x: math.exp(theta * x))
    if kind == "resolvent":
        shift = n + 1 if matrix == "L" else 2 * n - 1
        return _monotone_sum(vals, e, lambda x: 1.0 / (shift - x))
    if kind == "threshold":
        if a < 0 or p < 2:
            raise GraphError("threshold functional needs a >= 0 and p >= 2")
        return _monotone_sum(vals, e, lambda x: max(x - a, 0.0) ** p)
    raise GraphError(f"unknown functional kind {kind!r}")


# -- Mellin identity ------------------------------------------------------------------------------


def mellin_constant(alpha: float) -> float:
    return alpha * math.sin(math.pi * (alpha - 1.0)) / math.pi


def mellin_check(t: float, alpha: float, quad_tol: float = 1e-9) -> tuple[float, float]:
    """Return ``(t^alpha, c_alpha * int_0^inf r1(x t) x^(-alpha-1) dx)``.

    The integral is split into a small-``x`` piece, a middle piece integrated
    by adaptive Simpson in the variable ``s = log x``, and a large-``x`` piece.
    The two end pieces use truncated expansions of ``r1`` whose remainders
    are bounded by the next term, and the cut points are chosen so those
    remainders stay below ``quad_tol / 10``.
    """
    if not 1.0 < alpha < 2.0:
        raise GraphError("alpha must lie in (1, 2)")
    if t < 0:
        raise GraphError("t must be non-negative")
    if t == 0:
        return 0.0, 0.0
    lhs = t ** alpha
    c = mellin_constant(alpha)
    eps = quad_tol / 10.0
    # small x: r1(u) = u^2/2 - u^3/3 + R, |R| <= u^4/4 for u >= 0
    lo = (eps * 4.0 * (4.0 - alpha) / t**4) ** (1.0 / (4.0 - alpha))
    lo = min(lo, 1e-2 / t)
    head = t**2 * lo ** (2 - alpha) / (2 * (2 - alpha)) - t**3 * lo ** (3 - alpha) / (3 * (3 - alpha))
    # large x: r1(u) = u - log u - log(1 + 1/u), 0 <= log(1+1/u) <= 1/u
    hi = (1.0 / (eps * t * (alpha + 1.0))) ** (1.0 / (alpha + 1.0))
    hi = max(hi, 1e2 / t)
    tail = (
        t * hi ** (1 - alpha) / (alpha - 1)
        - (math.log(t * hi) / alpha + 1.0 / alpha**2) * hi ** (-alpha)
        - 0.5 / (t * (alpha + 1.0)) * hi ** (-alpha - 1)
    )

    def integrand(s: float) -> float:
        x = math.exp(s)
        u = x * t
        r = u - math.log1p(u) if u > 1e-4 else u * u * (0.5 - u * (1.0 / 3.0 - u * (0.25 - u / 5.0)))
        return r * x ** (-alpha)

    middle = adaptive_simpson(integrand, math.log(lo), math.log(hi), tol=quad_tol / 10.0, initial_panels=64)
    return lhs, c * (head + middle + tail)


# -- rank-one spectral shift -------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of intervals ``[a_i, b_i]`` in ``[0, inf)``, disjoint up to endpoints."""

    intervals: tuple[tuple[float, float], ...]

    @property
    def total_length(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def j(self, t: float) -> float:
        return j_of(self, t)

    def moment(self, r: int) -> float:
        """``int_E y^r dy``."""
        return sum((b ** (r + 1) - a ** (r + 1)) / (r + 1) for a, b in self.intervals)

    def within(self, lo: float, hi: float, tol: float = 0.0) -> bool:
        return all(a >= lo - tol and b <= hi + tol for a, b in self.intervals)


def j_of(e: IntervalSet, t: float) -> float:
    """``J_E(t) = int_E (y - t)_+ dy`` evaluated interval by interval."""
    return sum(0.5 * max(b - t, 0.0) ** 2 - 0.5 * max(a - t, 0.0) ** 2 for a, b in e.intervals)


def i_of(u, v, t):
    """``int_u^v (y - t)_+ dy`` by its three-piece closed form (exact for rational input)."""
    if t >= v:
        return 0 * t
    if t >= u:
        return (v - t) * (v - t) / 2
    return (v - u) * ((u + v) / 2 - t)


def shift_intervals(m, b, err_tol: float | None = None) -> tuple[IntervalSet, SpectralData, SpectralData]:
    """Gap intervals between the sorted spectra of ``M`` and ``M + b b^T``.

    Returns the interval set together with both spectra.  Raises if the
    spectra fail to interlace or ``M`` has a negative eigenvalue beyond the
    certified error.
    """
    mm = np.asarray(m, dtype=float)
    bv = np.asarray(b, dtype=float).reshape(-1)
    m1 = mm + np.outer(bv, bv)
    m1 = 0.5 * (m1 + m1.T)
    s0 = eig_sym(mm, 1e-9)
    s1 = eig_sym(m1, 1e-9)
    tol = err_tol if err_tol is not None else 4 * (s0.err + s1.err) + 1e-12
    if s0.values and s0.values[-1] < -tol:
        raise GraphError("shift intervals need a positive semidefinite matrix")
    a = s0.values
    bb = s1.values
    ivs = []
    for i in range(len(a)):
        if bb[i] < a[i] - tol or (i + 1 < len(a) and a[i] < bb[i + 1] - tol):
            raise ConsistencyError(f"rank-one interlacing violated at index {i}")
        lo = max(a[i], 0.0)
        hi = max(bb[i], lo)
        if hi > lo:
            ivs.append((lo, hi))
    return IntervalSet(tuple(ivs)), s0, s1


def _quad_form_plus(mm: np.ndarray, bv: np.ndarray, t: float) -> float:
    w, v = np.linalg.eigh(mm)
    c = v.T @ bv
    return float(np.sum(np.maximum(w - t, 0.0) * c * c))


def rank_one_gain(m, b, t: float, quad_steps: int = 16, tol: float = 1e-8) -> Estimate:
    """Trace difference ``tr(M+bb^T - t)_+^2 - tr(M - t)_+^2`` cross-checked against
    ``2 int_0^1 b^T (M + theta b b^T - t)_+ b d theta``."""
    mm = np.asarray(m, dtype=float)
    bv = np.asarray(b, dtype=float).reshape(-1)
    if not np.any(bv):
        return Estimate(0.0, 0.0)
    m1 = mm + np.outer(bv, bv)
    s0 = eig_sym(mm, 1e-9)
    s1 = eig_sym(0.5 * (m1 + m1.T), 1e-9)
    direct = stoploss_values(s1.values, s1.err, t) - stoploss_values(s0.values, s0.err, t)
    err = stoploss_values(s1.values, s1.err, t).err + stoploss_values(s0.values, s0.err, t).err
    integral = 2.0 * adaptive_simpson(
        lambda th: _quad_form_plus(mm + th * np.outer(bv, bv), bv, t), 0.0, 1.0, tol=tol / 10, initial_panels=quad_steps
    )
    scale = max(1.0, abs(direct))
    if abs(integral - direct) > tol * scale + err:
        raise ConsistencyError(f"trace formula mismatch: direct={direct!r} integral={integral!r}")
    return Estimate(direct, err)
