"""Matching generating polynomials and the identities built on them.

``matching_poly`` is the weighted sum over matchings of (product of edge
weights) times ``x^size``.  For forests it coincides with
``det(I + x B^T B)``, which ``gram_charpoly`` computes independently from the
characteristic polynomial of a rational Gram matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .exact_linalg import det_one_plus_x
from .graph import ContractViolation, Graph, GraphError
from .poly import RatPoly, RatPoly2, real_rooted_negative
from .transforms import Bipartition, TreeShiftStep, bipartition_of, validate_step

__all__ = [
    "matching_poly",
    "path_poly",
    "gram_charpoly",
    "forest_gram_scaling",
    "ThetaInterpolation",
    "theta_interpolation",
    "shifted_weighted_graph",
    "real_rooted_negative",
    "DeletionRatioEvidence",
    "deletion_ratio_evidence",
    "matching_poly_brute",
]

_ONE = RatPoly.const(1)


def matching_poly(g: Graph) -> RatPoly:
    """Exact weighted matching polynomial by the edge recursion.

    The recursion removes the highest-index remaining edge ``e = uv``:
    ``M(S) = M(S - e) + w_e x M(S - edges at u or v)``.  Connected pieces of
    the remaining edge set are handled separately and multiplied.  The memo
    is keyed by the exact remaining edge set and lives for one call only.
    """
    if g.weights is not None and any(w < 0 for w in g.weights):
        raise GraphError("matching polynomial needs non-negative weights")
    weight = dict(zip(g.edges, g.weights)) if g.weights is not None else None
    memo: dict[frozenset, RatPoly] = {}

    def w_of(e) -> Fraction:
        return weight[e] if weight is not None else Fraction(1)

    def solve(edges: frozenset) -> RatPoly:
        if not edges:
            return _ONE
        if len(edges) == 1:
            (e,) = edges
            return RatPoly([1, w_of(e)])
        hit = memo.get(edges)
        if hit is not None:
            return hit
        parts = _edge_components(edges)
        if len(parts) > 1:
            out = _ONE
            for part in parts:
                out = out * solve(part)
        else:
            e = max(edges)
            u, v = e
            rest = edges - {e}
            without = frozenset(f for f in rest if u not in f and v not in f)
            out = solve(rest) + RatPoly([0, w_of(e)]) * solve(without)
        memo[edges] = out
        return out

    return solve(frozenset(g.edges))


def _edge_components(edges: frozenset) -> list[frozenset]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, set] = {}
    for e in edges:
        groups.setdefault(find(e[0]), set()).add(e)
    return [frozenset(s) for s in groups.values()]


def matching_poly_brute(g: Graph) -> RatPoly:
    """Oracle: enumerate every edge subset and keep the matchings."""
    coeffs = [Fraction(0)] * (g.n // 2 + 1)
    wedges = list(g.weighted_edges())
    for k in range(len(coeffs)):
        for subset in itertools.combinations(wedges, k):
            used = [x for u, v, _ in subset for x in (u, v)]
            if len(set(used)) == len(used):
                prod = Fraction(1)
                for _, _, w in subset:
                    prod *= w
                coeffs[k] += prod
    return RatPoly(coeffs)


@lru_cache(maxsize=None)
def path_poly(m: int) -> RatPoly:
    """Matching polynomial of the path on ``m`` vertices; ``m = -1`` gives 0."""
    if m < -1:
        raise GraphError("path polynomial index must be at least -1")
    if m == -1:
        return RatPoly()
    if m <= 1:
        return _ONE
    return path_poly(m - 1) + RatPoly.x() * path_poly(m - 2)


# -- forest Gram determinant ------------------------------------------------------------------


def forest_gram_scaling(f: Graph, bip: Bipartition) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    """Squared diagonal scalings ``R`` (left) and ``C`` (right) with ``R_u C_v = w_uv`` on every edge.

    Such scalings exist on a forest because each edge is reached once when
    propagating from a root; they let ``B^T B`` (irrational when weights are
    not squares) be replaced by the similar rational matrix ``C J^T R J``.
    """
    row: dict[int, Fraction] = {}
    col: dict[int, Fraction] = {}
    for comp in f.components():
        root = comp[0]
        (row if root in bip.left else col)[root] = Fraction(1)
        stack = [root]
        while stack:
            x = stack.pop()
            for y in f.neighbors(x):
                w = f.weight(x, y)
                if x in bip.left:
                    if y not in col:
                        col[y] = w / row[x]
                        stack.append(y)
                else:
                    if y not in row:
                        row[y] = w / col[x]
                        stack.append(y)
    return row, col


def gram_charpoly(f: Graph, bip: Bipartition | None = None) -> RatPoly:
    """Exact ``det(I + x B^T B)`` of a weighted forest from a rational characteristic polynomial."""
    if not f.is_forest():
        raise ContractViolation("gram_charpoly needs a forest")
    if f.weights is not None:
        keep = [(e, w) for e, w in zip(f.edges, f.weights) if w != 0]
        f = Graph(f.n, tuple(e for e, _ in keep), tuple(w for _, w in keep))
    if bip is None:
        bip = bipartition_of(f)
    bip.check(f)
    left = sorted(bip.left)
    right = sorted(bip.right)
    if not left or not right:
        return _ONE
    rscale, cscale = forest_gram_scaling(f, bip)
    # N = diag(C) J^T diag(R) J on the right side
    size = len(right)
    nmat = [[Fraction(0)] * size for _ in range(size)]
    for j, v in enumerate(right):
        for k, v2 in enumerate(right):
            common = f.neighbors(v) & f.neighbors(v2)
            s = sum((rscale[u] for u in common), Fraction(0))
            nmat[j][k] = cscale.get(v, Fraction(1)) * s
    return det_one_plus_x(nmat)


# -- theta interpolation --------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaInterpolation:
    """``M_theta`` for the tree with edge ``v w1`` weighted ``1 - theta`` and ``ua w1`` weighted ``theta``."""

    poly: RatPoly2
    derivative: RatPoly2
    core_weight: RatPoly  # (M_C - M_{C - v}) / x, zero when v is isolated in C
    arm_factor: RatPoly  # h_{a-1} h_{b-1}
    identity_holds: bool


def _core_component(t: Graph, step: TreeShiftStep) -> tuple[Graph, int]:
    drop = set(step.arm_a) | set(step.arm_b)
    keep = [x for x in range(t.n) if x not in drop]
    sub, back = t.induced(keep)
    local_v = back.index(step.v)
    for comp in sub.components():
        if local_v in comp:
            g, _ = sub.induced(comp)
            return g, comp.index(local_v)
    raise AssertionError("branch vertex lost")


def theta_interpolation(t: Graph, step: TreeShiftStep) -> ThetaInterpolation:
    """Bivariate matching polynomial along the shift and the exact derivative identity.

    Branch vertices of degree 2 are accepted here (the shift is then a
    relabelling and ``M_theta`` is constant in ``theta``).
    """
    validate_step(t, step, require_branching=False)
    if t.weights is not None and any(t.weight(*e) != 1 for e in _arm_edges(step)):
        raise ContractViolation("theta interpolation needs unit weights on the two arms")
    v, ua, w1 = step.v, step.arm_a[-1], step.arm_b[0]
    old = tuple(sorted((v, w1)))
    base_edges = [e for e in t.edges if e != old]
    base_w = [t.weight(*e) for e in base_edges]
    base = Graph.from_edges(t.n, base_edges, base_w if t.weights is not None else None)
    m_base = matching_poly(base)
    m_old = matching_poly(_without_vertices(base, (v, w1)))
    m_new = matching_poly(_without_vertices(base, (ua, w1)))
    theta = RatPoly2.theta()
    one = RatPoly2.from_x_poly(_ONE)
    xpoly = RatPoly.x()
    poly = (
        RatPoly2.from_x_poly(m_base)
        + (one - theta) * RatPoly2.from_x_poly(xpoly * m_old)
        + theta * RatPoly2.from_x_poly(xpoly * m_new)
    )
    deriv = poly.d_theta()
    core, lv = _core_component(t, step)
    m_core = matching_poly(core)
    m_core_minus = matching_poly(_without_vertices(core, (lv,)))
    diff = m_core - m_core_minus
    if diff[0] != 0:
        raise AssertionError("matching polynomials must share the constant term 1")
    core_weight = RatPoly(diff.coeffs[1:])
    arm_factor = path_poly(len(step.arm_a) - 1) * path_poly(len(step.arm_b) - 1)
    predicted = RatPoly2.from_x_poly(RatPoly.monomial(2) * core_weight * arm_factor)
    return ThetaInterpolation(poly, deriv, core_weight, arm_factor, predicted == deriv)


def _arm_edges(step: TreeShiftStep) -> Iterable[tuple[int, int]]:
    for arm in (step.arm_a, step.arm_b):
        prev = step.v
        for x in arm:
            yield (prev, x)
            prev = x


def _without_vertices(g: Graph, drop: Sequence[int]) -> Graph:
    """Same labels, all edges at ``drop`` removed (the vertices stay as isolated points)."""
    ds = set(drop)
    keep = [(e, w) for (e, w) in zip(g.edges, g.weights or (None,) * g.m) if e[0] not in ds and e[1] not in ds]
    return Graph(g.n, tuple(e for e, _ in keep), tuple(w for _, w in keep) if g.weights is not None else None)


def shifted_weighted_graph(t: Graph, step: TreeShiftStep, theta: Fraction) -> Graph:
    """Graph carrying both the old edge (weight ``1 - theta``) and the new edge (weight ``theta``)."""
    v, ua, w1 = step.v, step.arm_a[-1], step.arm_b[0]
    old = tuple(sorted((v, w1)))
    edges = list(t.edges) + [tuple(sorted((ua, w1)))]
    weights = [t.weight(*e) for e in t.edges] + [Fraction(theta)]
    weights[edges.index(old)] = 1 - Fraction(theta)
    return Graph.from_edges(t.n, edges, weights)


# -- deletion ratios ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class DeletionRatioEvidence:
    """Expansion of ``M_{Y-U}/M_Y`` as ``sum_S c_S prod_{a in S} 1/(1 + x mu_a)``."""

    coefficients: tuple[float, ...]
    min_coefficient: float
    max_identity_error: float
    passed: bool


def deletion_ratio_evidence(y: Graph, u: Sequence[int], tol: float = 1e-9,
                            sample_x: Sequence[Fraction] = (Fraction(1, 3), Fraction(1), Fraction(7, 2))
                            ) -> DeletionRatioEvidence:
    """Coefficients ``det(Q[U, S])^2`` over eigenvector index sets ``S`` of ``B B^T``.

    The expansion is also evaluated at ``sample_x`` and compared with the exact
    ratio of matching polynomials to guard against a wrong basis.
    """
    if not y.is_forest():
        raise ContractViolation("deletion ratio evidence needs a forest")
    uset = sorted(set(u))
    if len(uset) > 2:
        raise ContractViolation("at most two deleted vertices are supported")
    if not uset:
        return DeletionRatioEvidence((1.0,), 1.0, 0.0, True)
    bip = bipartition_of(y)
    side = bip.left if uset[0] in bip.left else bip.right
    if any(x not in side for x in uset):
        raise ContractViolation("deleted vertices must lie on one side of the bipartition")
    rows = sorted(side)
    other = sorted(set(range(y.n)) - side)
    b = np.zeros((len(rows), len(other)))
    ri = {x: i for i, x in enumerate(rows)}
    ci = {x: j for j, x in enumerate(other)}
    for p, q, w in y.weighted_edges():
        if p in ri:
            b[ri[p], ci[q]] = math.sqrt(w)
        else:
            b[ri[q], ci[p]] = math.sqrt(w)
    mu, vecs = np.linalg.eigh(b @ b.T)
    k = len(uset)
    idx = [ri[x] for x in uset]
    coeffs = []
    sets = list(itertools.combinations(range(len(rows)), k))
    for s in sets:
        coeffs.append(float(np.linalg.det(vecs[np.ix_(idx, list(s))]) ** 2))
    my = matching_poly(y)
    myu = matching_poly(_without_vertices(y, uset))
    worst = 0.0
    for xv in sample_x:
        exact = float(myu(Fraction(xv)) / my(Fraction(xv)))
        approx = sum(c * math.prod(1.0 / (1.0 + float(xv) * mu[a]) for a in s) for c, s in zip(coeffs, sets))
        worst = max(worst, float(abs(exact - approx)))
    low = min(coeffs)
    return DeletionRatioEvidence(tuple(coeffs), low, worst, bool(low >= -tol and worst <= 1e-8))
