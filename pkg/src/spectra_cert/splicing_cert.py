"""Interval certification of the low-range path-splicing inequalities.

Two families of one-variable inequalities on ``1/6 <= rho <= 1/2`` are proved
by adaptive bisection in ball arithmetic:

* strips: ``D_p(rho) - C (1/49 + 1/(p + 6)^2) >= 1/10000`` for ``p = 2..6``,
  with ``C = 17 sqrt(3) pi^2 / 27``;
* boxes: ``K_{p,q}(rho) >= 1/10000`` for ``2 <= p <= q <= 6``.

``D_p(rho)`` is the integral over ``[0, rho]`` of
``(1[u < 1/6] + u - frac(p u)) * 16 pi sin(2 pi u) (cos(2 pi u) - cos(2 pi rho))``;
the first factor is affine on each cell between the rational breakpoints, so
each cell is integrated with closed-form antiderivatives.  ``K_{p,q}`` is a
signed sum of squared cosine differences over a fixed set of active atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Sequence

import mpmath

from .ball import DEFAULT_PREC, Ball, BallError, pi_ball

SIXTH = Fraction(1, 6)
HALF = Fraction(1, 2)
TARGET = Fraction(1, 10000)
Interval = tuple[Fraction, Fraction]


class CertificationFailure(RuntimeError):
    def __init__(self, lo: Fraction, hi: Fraction, depth: int):
        self.box = (lo, hi)
        self.depth = depth
        super().__init__(f"certification failed on [{lo}, {hi}] at depth {depth}")


@dataclass(frozen=True)
class CertResult:
    boxes: int
    max_depth: int
    min_margin: mpmath.mpf
    passed: bool

    def log_line(self, label: str) -> str:
        return (
            f"{label}: boxes={self.boxes}, max_depth={self.max_depth}, "
            f"margin-after-target>={mpmath.nstr(self.min_margin, 22, strip_zeros=False)}"
        )


def breakpoints(p: int) -> list[Fraction]:
    """``{0, 1/6, 1/2}`` together with the multiples ``k/p`` that are at most ``1/2``."""
    pts = {Fraction(0), SIXTH, HALF}
    for k in range(p + 1):
        x = Fraction(k, p)
        if x <= HALF:
            pts.add(x)
    return sorted(pts)


def sub_intervals(points: Sequence[Fraction], lo: Fraction = SIXTH, hi: Fraction = HALF) -> list[Interval]:
    pts = sorted({lo, hi} | {Fraction(v) for v in points if lo <= Fraction(v) <= hi})
    return [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]


def cell_coefficients(p: int, u_mid: Fraction) -> tuple[Fraction, Fraction]:
    """``(alpha, beta)`` with ``1[u < 1/6] + u - frac(p u) = alpha + beta u`` on the cell containing ``u_mid``."""
    indicator = 1 if u_mid < SIXTH else 0
    k = floor(p * u_mid)
    return Fraction(indicator + k), Fraction(1 - p)


def _sin_antiderivative(u: Ball, alpha: Fraction, beta: Fraction) -> Ball:
    """Antiderivative of ``(alpha + beta u) sin(2 pi u)``."""
    pi = pi_ball(u.prec)
    a, b = Ball.exact_rational(alpha, u.prec), Ball.exact_rational(beta, u.prec)
    return -(a + b * u) * (2 * u * pi).cos() / (2 * pi) + b * (2 * u * pi).sin() / (4 * pi**2)


def _sin_cos_antiderivative(u: Ball, alpha: Fraction, beta: Fraction) -> Ball:
    """Antiderivative of ``(alpha + beta u) sin(2 pi u) cos(2 pi u)``."""
    pi = pi_ball(u.prec)
    a, b = Ball.exact_rational(alpha, u.prec), Ball.exact_rational(beta, u.prec)
    return -(a + b * u) * (4 * u * pi).cos() / (8 * pi) + b * (4 * u * pi).sin() / (32 * pi**2)


def d_strip(p: int, lo: Fraction, hi: Fraction, prec: int = DEFAULT_PREC) -> Ball:
    """Enclosure of ``D_p(rho)`` valid for every ``rho`` in ``[lo, hi]``.

    ``[lo, hi]`` must lie inside one cell of :func:`breakpoints` for the upper
    limit to be handled by a single antiderivative; otherwise the value is
    accumulated only over complete cells below ``lo``.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not (0 <= lo <= hi <= HALF):
        raise BallError("strip interval must lie in [0, 1/2]")
    pi = pi_ball(prec)
    rho = Ball.hull(lo, hi, prec)
    c_rho = (2 * rho * pi).cos()
    total = Ball(0, 0, prec)
    if hi <= 0:
        return total
    pts = breakpoints(p)
    for a, b in zip(pts, pts[1:]):
        alpha, beta = cell_coefficients(p, (a + b) / 2)
        aa = Ball.hull(a, a, prec)
        if b <= lo:
            bb = Ball.hull(b, b, prec)
            total = total + (_sin_cos_antiderivative(bb, alpha, beta) - _sin_cos_antiderivative(aa, alpha, beta))
            total = total - c_rho * (_sin_antiderivative(bb, alpha, beta) - _sin_antiderivative(aa, alpha, beta))
        elif a <= lo <= hi <= b:
            total = total + (_sin_cos_antiderivative(rho, alpha, beta) - _sin_cos_antiderivative(aa, alpha, beta))
            total = total - c_rho * (_sin_antiderivative(rho, alpha, beta) - _sin_antiderivative(aa, alpha, beta))
            break
    return 16 * pi * total


def box_atoms(p: int, q: int) -> list[tuple[Fraction, int]]:
    """Signed atoms ``(0,+1), (1/6,-1), (i/p,+1), (j/q,+1), (k/(p+q-1),-1)``."""
    atoms = [(Fraction(0), 1), (SIXTH, -1)]
    for n, sign in ((p, 1), (q, 1), (p + q - 1, -1)):
        for i in range(1, n // 2 + 1):
            atoms.append((Fraction(i, n), sign))
    return atoms


def box_breakpoints(p: int, q: int) -> list[Fraction]:
    pts = {SIXTH, HALF}
    for n in (p, q, p + q - 1):
        for i in range(1, n // 2 + 1):
            x = Fraction(i, n)
            if SIXTH <= x <= HALF:
                pts.add(x)
    return sorted(pts)


def k_box(p: int, q: int, lo: Fraction, hi: Fraction, prec: int = DEFAULT_PREC) -> Ball:
    """Enclosure of ``K_{p,q}(rho)`` for ``rho`` in ``[lo, hi]``, atoms with position at most ``lo`` active."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not 2 <= p <= q:
        raise BallError("k_box needs 2 <= p <= q")
    for x in box_breakpoints(p, q):
        if lo < x < hi:
            raise BallError(f"box [{lo}, {hi}] straddles the breakpoint {x}")
    pi = pi_ball(prec)
    c = (2 * Ball.hull(lo, hi, prec) * pi).cos()
    total = Ball(0, 0, prec)
    for alpha, sign in box_atoms(p, q):
        if alpha <= lo:
            ca = (2 * Ball.hull(alpha, alpha, prec) * pi).cos()
            total = total + Ball.exact_rational(sign, prec) * (ca - c) ** 2
    return 4 * total


def certify_bisect(f: Callable[[Fraction, Fraction], Ball], intervals: Sequence[Interval],
                   threshold: Ball | None = None, target: Fraction = TARGET, max_depth: int = 80,
                   prec: int = DEFAULT_PREC) -> CertResult:
    """Depth-first bisection until ``f(box) - threshold - target`` has a positive lower endpoint on every box."""
    thr = threshold if threshold is not None else Ball(0, 0, prec)
    tgt = Ball.exact_rational(target, prec)
    stack = [(lo, hi, 0) for lo, hi in intervals if lo < hi]
    boxes = 0
    deepest = 0
    min_lb = None
    while stack:
        lo, hi, depth = stack.pop()
        val = f(lo, hi) - thr - tgt
        lb = val.lower()
        if lb > 0:
            boxes += 1
            deepest = max(deepest, depth)
            min_lb = lb if min_lb is None else min(min_lb, lb)
            continue
        if depth >= max_depth:
            raise CertificationFailure(lo, hi, depth)
        mid = (lo + hi) / 2
        stack.append((lo, mid, depth + 1))
        stack.append((mid, hi, depth + 1))
    return CertResult(boxes, deepest, min_lb if min_lb is not None else mpmath.inf, True)


def strip_tail_constant(p: int, prec: int = DEFAULT_PREC) -> Ball:
    """``17 sqrt(3) pi^2 / 27 * (1/49 + 1/(p + 6)^2)``."""
    pi = pi_ball(prec)
    cstar = 17 * Ball.exact_rational(3, prec).sqrt() * pi**2 / 27
    return cstar * (Ball.exact_rational(Fraction(1, 49), prec) + Ball.exact_rational(Fraction(1, (p + 6) ** 2), prec))


def certify_strip(p: int, prec: int = DEFAULT_PREC, max_depth: int = 80) -> CertResult:
    return certify_bisect(
        lambda lo, hi: d_strip(p, lo, hi, prec),
        sub_intervals(breakpoints(p)),
        threshold=strip_tail_constant(p, prec),
        max_depth=max_depth,
        prec=prec,
    )


def certify_box(p: int, q: int, prec: int = DEFAULT_PREC, max_depth: int = 80) -> CertResult:
    return certify_bisect(
        lambda lo, hi: k_box(p, q, lo, hi, prec),
        sub_intervals(box_breakpoints(p, q)),
        max_depth=max_depth,
        prec=prec,
    )


STRIP_FAMILIES = tuple(range(2, 7))
BOX_FAMILIES = tuple((p, q) for p in range(2, 7) for q in range(p, 7))

# reference log: family -> (boxes, max_depth, margin after target)
REFERENCE_LOG: dict[object, tuple[int, int, str]] = {
    2: (5, 3, "0.2091836844141283218430"),
    3: (9, 3, "0.1756604797106717694729"),
    4: (12, 3, "0.002575662253562486996432"),
    5: (13, 3, "0.02292789726217865255910"),
    6: (13, 4, "0.01721408853350556955998"),
    (2, 2): (6, 2, "0.6508904537194193263616"),
    (2, 3): (7, 2, "0.6508904537194193263616"),
    (2, 4): (8, 2, "0.1397628182879857505511"),
    (2, 5): (9, 2, "0.1605815467508651960086"),
    (2, 6): (11, 2, "0.3478598236135151222984"),
    (3, 3): (12, 2, "0.1630188627846423176924"),
    (3, 4): (14, 4, "0.04679417034387588500977"),
    (3, 5): (17, 2, "0.03867331643307991465225"),
    (3, 6): (19, 3, "0.01218875666856765747070"),
    (4, 4): (22, 4, "0.02162922464482017427023"),
    (4, 5): (24, 4, "0.01281017241910717727167"),
    (4, 6): (26, 4, "0.01309793728482616588252"),
    (5, 5): (26, 3, "0.06549360929678128259141"),
    (5, 6): (28, 3, "0.2281424839653801320633"),
    (6, 6): (30, 3, "0.04313603171528256053184"),
}


def family_label(family) -> str:
    if isinstance(family, tuple):
        return f"p={family[0]}, q={family[1]}"
    return f"p={family}"


def run_family(family, prec: int = DEFAULT_PREC, max_depth: int = 80) -> CertResult:
    if isinstance(family, tuple):
        return certify_box(family[0], family[1], prec, max_depth)
    return certify_strip(family, prec, max_depth)


def run_suite(prec: int = DEFAULT_PREC, max_depth: int = 80) -> dict[object, CertResult]:
    return {fam: run_family(fam, prec, max_depth) for fam in STRIP_FAMILIES + BOX_FAMILIES}


def matching_digits(value: mpmath.mpf, reference: str) -> float:
    """Number of agreeing significant digits, ``-log10(|value - ref| / |ref|)``."""
    ref = mpmath.mpf(reference)
    rel = abs(value - ref) / abs(ref)
    return float("inf") if rel == 0 else float(-mpmath.log10(rel))
