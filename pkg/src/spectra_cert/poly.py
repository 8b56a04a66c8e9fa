"""Dense polynomials with exact rational coefficients.

``RatPoly`` is univariate (constant term first).  ``RatPoly2`` is bivariate
in ``(x, theta)`` and is used for the edge-weight interpolation between a tree
and its shifted tree.  Sturm sequences give exact real-root counts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _trim(coeffs: Iterable[Number]) -> tuple[Fraction, ...]:
    c = [Fraction(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class RatPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs: tuple[Fraction, ...] = _trim(coeffs)

    # -- constructors --------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "RatPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "RatPoly":
        return cls([0] * k + [c])

    # -- basic properties ----------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatPoly.const(other)
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _lift(other: "RatPoly | Number") -> "RatPoly":
        return other if isinstance(other, RatPoly) else RatPoly.const(other)

    def __add__(self, other: "RatPoly | Number") -> "RatPoly":
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return RatPoly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly | Number") -> "RatPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: "RatPoly | Number") -> "RatPoly":
        return self._lift(other) - self

    def __mul__(self, other: "RatPoly | Number") -> "RatPoly":
        if not isinstance(other, RatPoly):
            c = Fraction(other)
            return RatPoly(a * c for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        if k < 0:
            raise ValueError("negative power")
        result = RatPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead()
        dq = other.degree
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                q[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return RatPoly(q), RatPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def monic(self) -> "RatPoly":
        return self * (1 / self.lead()) if self.coeffs else self

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def antiderivative(self) -> "RatPoly":
        return RatPoly([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def __call__(self, t):
        acc = 0 * t if not isinstance(t, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def compose(self, inner: "RatPoly") -> "RatPoly":
        acc = RatPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift_scale(self, a: Number, h: Number) -> "RatPoly":
        """Return ``P(a + h x)``."""
        return self.compose(RatPoly([a, h]))

    def nonneg_coeffs(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "RatPoly":
        return cls(Fraction(c) for c in obj["coeffs"])


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: RatPoly) -> RatPoly:
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append(-r)
    return seq[:-1]


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Sequence[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _signs_at(seq: Sequence[RatPoly], t: Fraction | None, at_minus_inf: bool = False) -> list[int]:
    if t is None:
        if at_minus_inf:
            return [_sign(q.lead()) * (-1 if q.degree % 2 else 1) for q in seq]
        return [_sign(q.lead()) for q in seq]
    return [_sign(q(t)) for q in seq]


def count_real_roots(p: RatPoly, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots in ``(lo, hi]``; ``None`` means an infinite endpoint."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    seq = sturm_sequence(p)
    v_lo = _variations(_signs_at(seq, lo, at_minus_inf=True))
    v_hi = _variations(_signs_at(seq, hi))
    return v_lo - v_hi


def real_rooted_negative(p: RatPoly) -> bool:
    """True iff every complex root of ``p`` is real and strictly negative."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return True
    if p[0] == 0:
        return False
    sq = squarefree_part(p)
    # roots in (-inf, 0]; p(0) != 0 so the right endpoint is excluded.
    return count_real_roots(sq, None, Fraction(0)) == sq.degree


class RatPoly2:
    """Bivariate polynomial ``sum c[i][j] x^i theta^j`` stored as one RatPoly in theta per power of x."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[RatPoly] = ()):
        r = list(rows)
        while r and r[-1].is_zero():
            r.pop()
        self.rows: tuple[RatPoly, ...] = tuple(r)

    @classmethod
    def from_x_poly(cls, p: RatPoly) -> "RatPoly2":
        return cls(RatPoly.const(c) for c in p.coeffs)

    @classmethod
    def theta(cls) -> "RatPoly2":
        return cls([RatPoly.x()])

    def _row(self, i: int) -> RatPoly:
        return self.rows[i] if i < len(self.rows) else RatPoly()

    def __add__(self, other: "RatPoly2") -> "RatPoly2":
        n = max(len(self.rows), len(other.rows))
        return RatPoly2(self._row(i) + other._row(i) for i in range(n))

    def __sub__(self, other: "RatPoly2") -> "RatPoly2":
        n = max(len(self.rows), len(other.rows))
        return RatPoly2(self._row(i) - other._row(i) for i in range(n))

    def __mul__(self, other: "RatPoly2 | RatPoly | Number") -> "RatPoly2":
        if isinstance(other, RatPoly):
            other = RatPoly2.from_x_poly(other)
        if not isinstance(other, RatPoly2):
            return RatPoly2(r * other for r in self.rows)
        if not self.rows or not other.rows:
            return RatPoly2()
        out = [RatPoly() for _ in range(len(self.rows) + len(other.rows) - 1)]
        for i, a in enumerate(self.rows):
            for j, b in enumerate(other.rows):
                out[i + j] = out[i + j] + a * b
        return RatPoly2(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RatPoly2) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def at_theta(self, theta: Number) -> RatPoly:
        return RatPoly(r(Fraction(theta)) for r in self.rows)

    def d_theta(self) -> "RatPoly2":
        return RatPoly2(r.derivative() for r in self.rows)

    def x_degree(self) -> int:
        return len(self.rows) - 1

    def theta_degree(self) -> int:
        return max((r.degree for r in self.rows), default=-1)

    def __repr__(self) -> str:
        return f"RatPoly2({[str(r) for r in self.rows]})"
