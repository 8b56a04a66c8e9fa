"""Exact Bernstein-basis positivity certificates and the scalar/moment polynomial suites.

All arithmetic in this module is over the rationals.  A polynomial ``P`` is
certified non-negative on ``[lo, hi]`` when every coefficient of its
Bernstein expansion there is non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .graph import GraphError
from .poly import RatPoly

Q = Fraction
T = RatPoly.x()


class CertificateFailure(AssertionError):
    """A named exact check did not hold."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"certificate {name} failed" + (f": {detail}" if detail else ""))


def bernstein_coeffs(p: RatPoly, lo, hi, m: int | None = None) -> list[Fraction]:
    """Degree-``m`` Bernstein coefficients of ``p`` on ``[lo, hi]``.

    With ``c_j`` the power coefficients of ``p(lo + (hi - lo) x)``,
    ``b_k = sum_{j <= k} c_j C(k, j) / C(m, j)``.
    """
    lo, hi = Q(lo), Q(hi)
    if lo >= hi:
        raise GraphError("Bernstein interval needs lo < hi")
    deg = max(p.degree, 0)
    if m is None:
        m = deg
    if m < p.degree:
        raise GraphError(f"Bernstein degree {m} is below the polynomial degree {p.degree}")
    c = p.shift_scale(lo, hi - lo)
    return [sum((c[j] * Q(comb(k, j), comb(m, j)) for j in range(k + 1)), Q(0)) for k in range(m + 1)]


@dataclass(frozen=True)
class BernsteinCertificate:
    poly_name: str
    interval: tuple[Fraction, Fraction]
    degree: int
    coeffs: tuple[Fraction, ...]
    min_coeff: Fraction
    bound: Fraction
    strict: bool = False

    @property
    def passed(self) -> bool:
        return self.min_coeff > self.bound if self.strict else self.min_coeff >= self.bound

    def to_json(self) -> dict:
        return {
            "name": self.poly_name,
            "interval": [str(self.interval[0]), str(self.interval[1])],
            "degree": self.degree,
            "min_coeff": str(self.min_coeff),
            "bound": str(self.bound),
            "comparison": ">" if self.strict else ">=",
            "passed": self.passed,
        }


def certify_nonneg(p: RatPoly, lo, hi, m: int | None = None, bound=0, name: str = "P",
                   strict: bool = False) -> BernsteinCertificate:
    coeffs = bernstein_coeffs(p, lo, hi, m)
    return BernsteinCertificate(
        name, (Q(lo), Q(hi)), len(coeffs) - 1, tuple(coeffs), min(coeffs), Q(bound), strict
    )


# -- moment polynomials ---------------------------------------------------------------------


def _poly_matrix_moments(base: Sequence[Sequence[int]], b: Sequence[int], j_max: int) -> list[RatPoly]:
    """``b^T (base + theta b b^T)^j b`` for ``j = 0..j_max`` as polynomials in theta."""
    n = len(base)
    theta = RatPoly.x()
    vec = [RatPoly.const(x) for x in b]
    out = []
    for _ in range(j_max + 1):
        out.append(sum((vec[i] * b[i] for i in range(n) if b[i]), RatPoly()))
        proj = sum((vec[i] * b[i] for i in range(n) if b[i]), RatPoly())
        vec = [
            sum((vec[k] * base[i][k] for k in range(n) if base[i][k]), RatPoly()) + theta * proj * b[i]
            for i in range(n)
        ]
    return out


def tridiagonal_model(n: int) -> list[list[int]]:
    """Diagonal ``2, ..., 2, 1`` with ones on the off-diagonals."""
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1 if i == n - 1 else 2
        if i + 1 < n:
            m[i][i + 1] = m[i + 1][i] = 1
    return m


def moment_poly(n: int, j: int) -> RatPoly:
    """``b^T (T_n + theta b b^T)^j b`` with ``b = e_1 + e_n``."""
    if n < 3 or not 0 <= j <= 5:
        raise GraphError("moment_poly needs n >= 3 and 0 <= j <= 5")
    b = [1] + [0] * (n - 2) + [1]
    return _poly_matrix_moments(tridiagonal_model(n), b, j)[j]


def path_leaf_model(length: int) -> tuple[list[list[int]], list[int]]:
    """Signless Laplacian of the path-plus-leaf model and its probe vector ``e_0 + e_1``.

    Vertices: ``0`` and ``1`` are the ends of the probed edge, ``2..length`` the
    interior of the path from ``1`` back to ``0``, and ``length + 1`` a leaf at ``0``.
    """
    n = length + 2
    edges = []
    prev = 1
    for k in range(length - 1):
        edges.append((prev, 2 + k))
        prev = 2 + k
    edges.append((prev, 0))
    edges.append((0, n - 1))
    qm = [[0] * n for _ in range(n)]
    for i, j in edges:
        qm[i][i] += 1
        qm[j][j] += 1
        qm[i][j] += 1
        qm[j][i] += 1
    return qm, [1, 1] + [0] * (n - 2)


def line_model_poly(length: int, j: int = 5) -> RatPoly:
    if not 2 <= length <= 6:
        raise GraphError("line model length must lie in 2..6")
    qm, b = path_leaf_model(length)
    return _poly_matrix_moments(qm, b, j)[j]


def line_model_walk_counts(length: int) -> list[int]:
    """``b^T Q^j b`` for ``j = 0..5`` (the theta-free moments)."""
    qm, b = path_leaf_model(length)
    return [int(p[0]) for p in _poly_matrix_moments(qm, b, 5)]


# -- the scalar suites ---------------------------------------------------------------------------

Q5 = RatPoly([174, 387, 507, 440, 240, 64])
Q_STAR = RatPoly([249, 512, 603, 472, 240, 64])
MOMENT_TABLE = {
    1: RatPoly([3, 4]),
    2: RatPoly([7, 12, 8]),
    3: RatPoly([19, 37, 36, 16]),
    4: RatPoly([56, 118, 138, 96, 32]),
    5: Q5,
}


def _envelope_parts(a0: int, b0: int) -> tuple[RatPoly, RatPoly, RatPoly, RatPoly]:
    a = a0 - 7 * T**4
    b = b0 - 4 * T**4
    k = 5 * (T**3 + 5 * T**2 + 25 * T + 125)
    lhat = Q(1, 2) * a**2 * b**2 + 1000 * a**3
    return a, b, k, lhat


def scalar_envelope_rows() -> list[tuple[str, RatPoly, Fraction, Fraction, Fraction]]:
    """(name, polynomial, lo, hi, lower bound) for the eight scalar envelope rows."""
    c19 = Q(comb(39, 19), 20)
    _, b, k, lhat = _envelope_parts(1812, 4001)
    seven_halves = Q(7, 2)
    g0 = seven_halves - 2 * T
    g1 = 3 * T * (seven_halves - T) ** 2 - 5
    g2 = 320 * T**3 * (seven_halves - T) ** 2 - 1701
    f1 = T**18 * lhat - c19 * Q(18**18, 19**19) * b**3 * k
    f2 = lhat - c19 * (4 - T) * Q(1, 4**19) * b**3 * k
    return [
        ("G0", g0, Q(0), Q(3, 2), Q(1, 2)),
        ("G1", g1, Q(3, 2), Q(2), Q(17, 2)),
        ("G2", g2, Q(2), Q(3), Q(459)),
        ("F1", f1, Q(3), Q(72, 19), Q(10) ** 20),
        ("F2a", f2, Q(72, 19), Q(74, 19), Q(10) ** 11),
        ("F2b", f2, Q(74, 19), Q(75, 19), Q(10) ** 10),
        ("F2c", f2, Q(75, 19), Q(151, 38), Q(10) ** 9),
        ("F2d", f2, Q(151, 38), Q(4), Q(10) ** 8),
    ]


def catalan_shift(r: int) -> Fraction:
    """``C(2r + 2, r + 1) / (r + 1)``."""
    return Q(comb(2 * r + 2, r + 1), r + 1)


def first_branch_constant(r: int) -> Fraction:
    """``(r - 1)^(r - 1) / r^r``."""
    return Q((r - 1) ** (r - 1), r**r)


def line_graph_rows() -> list[tuple[str, RatPoly, Fraction, Fraction]]:
    """(name, polynomial, lo, hi) for the six line-graph envelope rows (strict positivity)."""
    _, b, k, lhat = _envelope_parts(2140, 4414)
    average = Q(1, 2) * (Q(7, 2) - T) ** 2
    rows = []
    for name, r, lo, hi in [("LG0", 3, Q(2), Q(12, 5)), ("LG1", 5, Q(12, 5), Q(14, 5)), ("LG2", 8, Q(14, 5), Q(3))]:
        rows.append((name, T ** (r - 1) * average - catalan_shift(r) * first_branch_constant(r), lo, hi))
    for name, r, lo, hi in [("LG3", 10, Q(3), Q(7, 2)), ("LG4", 30, Q(7, 2), Q(58, 15))]:
        rows.append((name, T ** (r - 1) * lhat - catalan_shift(r) * first_branch_constant(r) * b**3 * k, lo, hi))
    rows.append(("LG5", lhat - catalan_shift(30) * (4 - T) * Q(1, 4**30) * b**3 * k, Q(58, 15), Q(4)))
    return rows


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class EnvelopeReport:
    certificates: list[BernsteinCertificate] = field(default_factory=list)
    identities: list[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates) and all(i.passed for i in self.identities)

    def failures(self) -> list[str]:
        return [c.poly_name for c in self.certificates if not c.passed] + [
            i.name for i in self.identities if not i.passed
        ]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "certificates": [c.to_json() for c in self.certificates],
            "identities": [i.to_json() for i in self.identities],
        }


def _two_var_expansion(theta_poly: RatPoly, a0: int, b0: int, tail: Sequence[int]) -> bool:
    """Check ``q(1 - z) - t^4 (3 + 4 (1 - z)) = A - B z + tail_2 z^2 + ... `` in Q[t][z].

    Coefficients of ``z^k`` are compared as polynomials in ``t``.
    """
    one_minus_z = RatPoly([1, -1])
    qz = theta_poly.compose(one_minus_z)  # polynomial in z
    lin = 3 + 4 * one_minus_z  # polynomial in z
    t4 = T**4
    lhs = [RatPoly.const(qz[k]) - t4 * lin[k] for k in range(max(qz.degree, lin.degree) + 1)]
    rhs = [a0 - 7 * t4, -(b0 - 4 * t4)] + [RatPoly.const(c) for c in tail]
    n = max(len(lhs), len(rhs))
    pad = lambda seq, i: seq[i] if i < len(seq) else RatPoly()  # noqa: E731
    return all(pad(lhs, i) == pad(rhs, i) for i in range(n))


def _check(report: EnvelopeReport, name: str, cond: bool, detail: str = "") -> None:
    report.identities.append(IdentityCheck(name, bool(cond), detail))


def run_envelope_certificates() -> EnvelopeReport:
    """Run every scalar, moment and line-graph check in exact arithmetic."""
    rep = EnvelopeReport()
    for name, p, lo, hi, bound in scalar_envelope_rows():
        rep.certificates.append(certify_nonneg(p, lo, hi, bound=bound, name=name))
    for j, expected in MOMENT_TABLE.items():
        got = moment_poly(7, j)
        _check(rep, f"q{j}", got == expected, str(got))
    for n in (3, 4, 5, 6):
        _check(rep, f"moment_poly({n},5)-q5>=0", (moment_poly(n, 5) - Q5).nonneg_coeffs())
    _check(rep, "expansion q5(1-z)", _two_var_expansion(Q5, 1812, 4001, [3907, -2040, 560, -64]))
    a, b, _, _ = _envelope_parts(1812, 4001)
    num = a.derivative() * b - a * b.derivative()
    _check(rep, "h' numerator", num == RatPoly.monomial(3, -83036), str(num))
    _check(rep, "A(3)=1245", a(Q(3)) == 1245)
    _check(rep, "B(3)=3677", b(Q(3)) == 3677)
    h3 = Q(1245, 3677)
    d_low = 3907 - 2040 * h3 - 64 * h3**3
    _check(rep, "D lower bound > 3000", d_low > 3000, str(d_low))

    for length in (2, 3, 4, 5, 6):
        _check(rep, f"line model L={length} - q* >= 0", (line_model_poly(length) - Q_STAR).nonneg_coeffs())
    _check(rep, "line model L=6 equals q*", line_model_poly(6) == Q_STAR)
    _check(rep, "expansion q*(1-z)", _two_var_expansion(Q_STAR, 2140, 4414, [4099, -2072, 560, -64]))
    a2, b2, _, _ = _envelope_parts(2140, 4414)
    _check(rep, "A*(3)=1573", a2(Q(3)) == 1573)
    _check(rep, "B*(3)=4090", b2(Q(3)) == 4090)
    hmax = Q(1573, 4090)
    _check(rep, "4099-2072h-64h^3 > 3000", 4099 - 2072 * hmax - 64 * hmax**3 > 3000)
    for name, p, lo, hi in line_graph_rows():
        rep.certificates.append(certify_nonneg(p, lo, hi, bound=0, name=name, strict=True))
    return rep


def sample_points(lo: Fraction, hi: Fraction, count: int = 25) -> list[Fraction]:
    return [lo + (hi - lo) * Q(i, count - 1) for i in range(count)]


def exact_min_on_samples(p: RatPoly, lo: Fraction, hi: Fraction, count: int = 25) -> Fraction:
    return min(p(x) for x in sample_points(Q(lo), Q(hi), count))

