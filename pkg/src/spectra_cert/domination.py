"""Exact certification of the interval-domination inequalities.

For an interval ``[u, v]`` write ``I_uv(t) = int_u^v (y - t)_+ dy``.  With
integers ``r >= 1`` and ``d >= r + 2`` put ``m = d - r``, ``a = (m + 1) / d``
and ``B = a + d``.  Two piecewise-quadratic functions of ``t >= 0`` are
certified non-negative here, entirely over the rationals:

* ``H(t) = I_[a,B](t) - r I_[3,4](t)``;
* for ``d = r + 2`` only, ``H_d(t) = I_[a,B](t) - I_[2,4](t) - (d - 3) I_[3,4](t)``.

Every piece between consecutive breakpoints is an explicit rational
polynomial of degree at most two.  Breakpoints are the interval endpoints plus
every rational critical point of a piece, so each Bernstein expansion only
has to handle a monotone quadratic or affine piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bernstein import BernsteinCertificate, certify_nonneg
from .poly import RatPoly

Q = Fraction
T = RatPoly.x()

# (coefficient, u, v): the function is sum(coefficient * I_[u,v](t))
Term = tuple[Fraction, Fraction, Fraction]

MAX_ELEVATION = 8


def interval_integral_piece(u: Fraction, v: Fraction, lo: Fraction, hi: Fraction) -> RatPoly:
    """The polynomial that equals ``I_[u,v]`` on ``[lo, hi]``.

    ``[lo, hi]`` must not straddle ``u`` or ``v``; the regime is read off at
    the midpoint.
    """
    mid = (lo + hi) / 2
    if mid >= v:
        return RatPoly()
    if mid >= u:
        return (T * -1 + v) ** 2 * Q(1, 2)
    return (T * -1 + (u + v) / 2) * (v - u)


def interval_integral_value(u: Fraction, v: Fraction, t: Fraction) -> Fraction:
    if t >= v:
        return Q(0)
    if t >= u:
        return (v - t) ** 2 / 2
    return (v - u) * ((u + v) / 2 - t)


@dataclass(frozen=True)
class PiecewiseFunction:
    name: str
    terms: tuple[Term, ...]

    def __call__(self, t) -> Fraction:
        t = Q(t)
        return sum((c * interval_integral_value(u, v, t) for c, u, v in self.terms), Q(0))

    def kinks(self) -> list[Fraction]:
        return sorted({x for _, u, v in self.terms for x in (u, v)})

    def piece(self, lo: Fraction, hi: Fraction) -> RatPoly:
        total = RatPoly()
        for c, u, v in self.terms:
            total = total + interval_integral_piece(u, v, lo, hi) * c
        return total

    def support_end(self) -> Fraction:
        return max(v for _, _, v in self.terms)


def _critical_points(p: RatPoly, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Rational roots of ``p'`` strictly inside ``(lo, hi)`` for pieces of degree two."""
    if p.degree != 2:
        return []
    root = -p[1] / (2 * p[2])
    return [root] if lo < root < hi else []


def breakpoints(func: PiecewiseFunction, start: Fraction = Q(0)) -> list[Fraction]:
    end = func.support_end()
    points = sorted({start, end, *(k for k in func.kinks() if start < k < end)})
    refined: list[Fraction] = []
    for lo, hi in zip(points, points[1:]):
        refined.append(lo)
        refined.extend(_critical_points(func.piece(lo, hi), lo, hi))
    refined.append(points[-1])
    return refined


def _certify_piece(p: RatPoly, lo: Fraction, hi: Fraction, name: str) -> BernsteinCertificate:
    base = max(p.degree, 0)
    cert = certify_nonneg(p, lo, hi, name=name)
    for extra in range(1, MAX_ELEVATION + 1):
        if cert.passed:
            break
        cert = certify_nonneg(p, lo, hi, m=base + extra, name=name)
    return cert


@dataclass
class DominationCertificate:
    name: str
    d: int
    r: int
    breakpoints: list[Fraction]
    pieces: list[BernsteinCertificate]
    exact_zeros: list[Fraction]
    zero_pieces: list[tuple[Fraction, Fraction]]
    checkpoints: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)

    @property
    def checkpoints_ok(self) -> bool:
        return all(got == want for got, want in self.checkpoints.values())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.pieces) and self.checkpoints_ok

    @property
    def min_coeff(self) -> Fraction:
        return min(c.min_coeff for c in self.pieces)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "d": self.d,
            "r": self.r,
            "breakpoints": [str(b) for b in self.breakpoints],
            "pieces": [c.to_json() for c in self.pieces],
            "exact_zeros": [str(z) for z in self.exact_zeros],
            "zero_pieces": [[str(lo), str(hi)] for lo, hi in self.zero_pieces],
            "checkpoints": {k: [str(g), str(w)] for k, (g, w) in self.checkpoints.items()},
            "passed": self.passed,
        }


def certify_piecewise(func: PiecewiseFunction, d: int, r: int) -> DominationCertificate:
    """Bernstein-certify ``func >= 0`` on ``[0, inf)`` piece by piece.

    Beyond the right end of the support the function is identically zero.
    """
    points = breakpoints(func)
    pieces = []
    zero_pieces = []
    for lo, hi in zip(points, points[1:]):
        p = func.piece(lo, hi)
        if p.is_zero():
            zero_pieces.append((lo, hi))
        pieces.append(_certify_piece(p, lo, hi, f"{func.name}[{lo},{hi}]"))
    zero_pieces.append((points[-1], None))
    zeros = [t for t in points if func(t) == 0]
    return DominationCertificate(func.name, d, r, points, pieces, zeros, zero_pieces)


def domination_parameters(d: int, r: int) -> tuple[Fraction, Fraction]:
    if r < 1 or d < r + 2:
        raise ValueError(f"need r >= 1 and d >= r + 2, got d={d}, r={r}")
    a = Q(d - r + 1, d)
    return a, a + d


def main_function(d: int, r: int) -> PiecewiseFunction:
    a, b = domination_parameters(d, r)
    return PiecewiseFunction(f"H(d={d},r={r})", ((Q(1), a, b), (Q(-r), Q(3), Q(4))))


def borderline_function(d: int) -> PiecewiseFunction:
    a, b = domination_parameters(d, d - 2)
    return PiecewiseFunction(
        f"H_d(d={d})", ((Q(1), a, b), (Q(-1), Q(2), Q(4)), (Q(3 - d), Q(3), Q(4)))
    )


def certify_main(d: int, r: int) -> DominationCertificate:
    func = main_function(d, r)
    cert = certify_piecewise(func, d, r)
    m = d - r
    if m == 2:
        a, _ = domination_parameters(d, r)
        cert.checkpoints["H(a+m)"] = (func(a + m), r * (Q(r, 2) - Q(3, 2) + Q(3, r + 2)))
    return cert


def certify_borderline(d: int) -> DominationCertificate:
    func = borderline_function(d)
    cert = certify_piecewise(func, d, d - 2)
    a, _ = domination_parameters(d, d - 2)
    cert.checkpoints["H_d(a+1)"] = (func(a + 1), Q((d - 3) * (d * d - 4 * d + 2), 2 * d))
    cert.checkpoints["H_d(2)"] = (func(2), Q((d - 3) * (d ** 3 - 4 * d * d + 3 * d - 3), 2 * d * d))
    return cert


@dataclass
class DominationReport:
    d_max: int
    certificates: list[DominationCertificate]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)

    @property
    def failures(self) -> list[DominationCertificate]:
        return [c for c in self.certificates if not c.passed]

    @property
    def piece_count(self) -> int:
        return sum(len(c.pieces) for c in self.certificates)

    def equality_cases(self) -> list[tuple[str, Fraction]]:
        """Breakpoints inside the support where a certified function vanishes exactly."""
        out = []
        for c in self.certificates:
            end = c.breakpoints[-1]
            out.extend((c.name, z) for z in c.exact_zeros if z < end)
        return out

    def to_json(self) -> dict:
        return {
            "d_max": self.d_max,
            "passed": self.passed,
            "certificates": len(self.certificates),
            "pieces": self.piece_count,
            "equality_cases": [[n, str(z)] for n, z in self.equality_cases()],
            "failures": [c.to_json() for c in self.failures],
        }


def parameter_pairs(d_max: int) -> list[tuple[int, int]]:
    return [(d, r) for d in range(3, d_max + 1) for r in range(1, d - 1)]


def certify_interval_domination(d_max: int = 40) -> DominationReport:
    if d_max < 3:
        raise ValueError("d_max must be at least 3")
    certs = [certify_main(d, r) for d, r in parameter_pairs(d_max)]
    certs += [certify_borderline(d) for d in range(3, d_max + 1)]
    return DominationReport(d_max, certs)


def sample_check(func: PiecewiseFunction, points: Sequence[Fraction]) -> Fraction:
    """Exact minimum of ``func`` over the given sample points."""
    return min(func(t) for t in points)


__all__ = [
    "DominationCertificate",
    "DominationReport",
    "PiecewiseFunction",
    "borderline_function",
    "breakpoints",
    "certify_borderline",
    "certify_interval_domination",
    "certify_main",
    "certify_piecewise",
    "domination_parameters",
    "interval_integral_piece",
    "interval_integral_value",
    "main_function",
    "parameter_pairs",
    "sample_check",
]
