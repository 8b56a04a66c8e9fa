"""Midpoint-radius ball arithmetic with guaranteed enclosures.

A :class:`Ball` stands for the closed interval ``[mid - rad, mid + rad]``.
Midpoints are ``mpmath.mpf`` values rounded to ``prec`` bits; every operation
adds a bound on its own rounding error to the radius, so the result always
encloses the exact image of the input intervals.

Radius propagation follows the usual first-order-plus-product rules:

* ``x * y``: ``|x.mid| y.rad + |y.mid| x.rad + x.rad y.rad``
* ``x / y``: ``(|x.mid| y.rad + |y.mid| x.rad) / (|y.mid| (|y.mid| - y.rad))``
* ``sin``/``cos`` of an inexact ball: the hull of the exact image, found
  from the two endpoint values plus any interior extremum.  This is much
  tighter than widening the midpoint value by the radius when the ball is wide.

The sine and cosine kernels are hand-written: the argument is reduced by an
enclosed ``pi / 2`` and a Taylor series with an explicit remainder bound is
summed at a few guard bits above the working precision.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from mpmath import mpf

Rational = Union[int, Fraction]
DEFAULT_PREC = 256
_GUARD = 32


class BallError(ArithmeticError):
    pass


def _ulp(x: mpf, prec: int) -> mpf:
    """Upper bound on the rounding error of a value of magnitude ``|x|`` at ``prec`` bits."""
    if x == 0:
        return mpf(0)
    _, e = mpmath.frexp(abs(x))
    return mpmath.ldexp(mpf(1), int(e) - prec)


def _round(x, prec: int) -> tuple[mpf, mpf]:
    """Round ``x`` (an mpf computed at higher precision) to ``prec`` bits; return value and error bound."""
    with mpmath.workprec(prec):
        v = +x
    with mpmath.workprec(prec + 2 * _GUARD):
        err = abs(x - v)
    return v, err


def _as_fraction(x: mpf) -> Fraction:
    """Exact rational value of a finite binary float."""
    man, exp = x.man_exp
    return Fraction(man) * Fraction(2) ** exp


def _up(x: mpf) -> mpf:
    """Slight upward bias for radius bounds computed in nearest rounding."""
    return x * (1 + mpmath.ldexp(mpf(1), -50)) if x else x


class Ball:
    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=0, prec: int = DEFAULT_PREC):
        if prec < 64:
            raise BallError("ball precision must be at least 64 bits")
        self.prec = prec
        with mpmath.workprec(prec):
            self.mid = +mpf(mid)
        rad = mpf(rad)
        if rad < 0 or not mpmath.isfinite(rad):
            raise BallError("ball radius must be finite and non-negative")
        self.rad = rad

    # -- constructors ---------------------------------------------------------

    @classmethod
    def exact_rational(cls, q: Rational, prec: int = DEFAULT_PREC) -> "Ball":
        q = Fraction(q)
        with mpmath.workprec(prec + 2 * _GUARD):
            hi = mpf(q.numerator) / q.denominator
        mid, err = _round(hi, prec)
        # the guarded quotient is itself off by at most one guarded ulp
        err += _ulp(hi, prec + 2 * _GUARD - 1)
        return cls(mid, mpf(0) if _as_fraction(mid) == q else _up(err), prec)

    @classmethod
    def hull(cls, lo: Rational, hi: Rational, prec: int = DEFAULT_PREC) -> "Ball":
        """Ball with rational midpoint ``(lo + hi) / 2`` and radius ``(hi - lo) / 2``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise BallError("hull needs lo <= hi")
        centre = cls.exact_rational((lo + hi) / 2, prec)
        half = (hi - lo) / 2
        with mpmath.workprec(64):
            r = mpf(half.numerator) / half.denominator
        return cls(centre.mid, _up(centre.rad + _up(r)), prec)

    def _make(self, mid_hi, rad, prec=None) -> "Ball":
        prec = prec or self.prec
        mid, err = _round(mid_hi, prec)
        return Ball(mid, _up(rad + err), prec)

    # -- queries -------------------------------------------------------------

    def lower(self) -> mpf:
        with mpmath.workprec(self.prec + _GUARD):
            return self.mid - self.rad

    def upper(self) -> mpf:
        with mpmath.workprec(self.prec + _GUARD):
            return self.mid + self.rad

    def contains(self, x) -> bool:
        with mpmath.workprec(self.prec + 2 * _GUARD):
            return abs(mpf(x) - self.mid) <= self.rad

    def is_exact(self) -> bool:
        return self.rad == 0

    def __repr__(self) -> str:
        return f"Ball({mpmath.nstr(self.mid, 20)} +/- {mpmath.nstr(self.rad, 3)})"

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x, prec: int) -> "Ball":
        if isinstance(x, Ball):
            return x
        if isinstance(x, (int, Fraction)):
            return Ball.exact_rational(x, prec)
        raise TypeError(f"cannot combine Ball with {type(x).__name__}")

    def __neg__(self) -> "Ball":
        with mpmath.workprec(self.prec):
            return Ball(-self.mid, self.rad, self.prec)

    def __add__(self, other) -> "Ball":
        o = self._coerce(other, self.prec)
        prec = min(self.prec, o.prec)
        with mpmath.workprec(prec + 2 * _GUARD):
            return self._make(self.mid + o.mid, self.rad + o.rad, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "Ball":
        return self + (-self._coerce(other, self.prec))

    def __rsub__(self, other) -> "Ball":
        return self._coerce(other, self.prec) - self

    def __mul__(self, other) -> "Ball":
        o = self._coerce(other, self.prec)
        prec = min(self.prec, o.prec)
        with mpmath.workprec(2 * prec + 2 * _GUARD):
            mid = self.mid * o.mid
            rad = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return self._make(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Ball":
        o = self._coerce(other, self.prec)
        prec = min(self.prec, o.prec)
        with mpmath.workprec(prec + 2 * _GUARD):
            ym = abs(o.mid)
            if ym <= o.rad:
                raise BallError("division by a ball containing zero")
            mid = self.mid / o.mid
            if o.rad == 0:
                rad = self.rad / ym
            else:
                rad = (abs(self.mid) * o.rad + ym * self.rad) / (ym * (ym - o.rad))
            # the guarded quotient is off by one guarded ulp
            rad += _ulp(mid, prec + 2 * _GUARD - 1)
        return self._make(mid, rad, prec)

    def __rtruediv__(self, other) -> "Ball":
        return self._coerce(other, self.prec) / self

    def __pow__(self, k: int) -> "Ball":
        if not isinstance(k, int) or k < 0:
            raise BallError("only non-negative integer powers are supported")
        result = Ball.exact_rational(1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- elementary functions -------------------------------------------------

    def sqrt(self) -> "Ball":
        if self.lower() < 0:
            raise BallError("square root of a ball reaching below zero")
        with mpmath.workprec(self.prec + 2 * _GUARD):
            mid = mpmath.sqrt(self.mid)
            lo = self.mid - self.rad
            # sqrt is concave: the widest deviation is on the low side
            rad = mid - mpmath.sqrt(lo) if lo > 0 else mid
            rad += _ulp(mid, self.prec + 2 * _GUARD - 2)
        return self._make(mid, rad)

    def cos(self) -> "Ball":
        return self._trig(0)

    def sin(self) -> "Ball":
        return self._trig(1)

    def _trig(self, which: int) -> "Ball":
        """Hull of the exact image of the ball under cos (``which=0``) or sin (``which=1``)."""
        if not self.rad:
            val = _sin_cos_point(self.mid, self.prec)[which]
            return self._make(val[0], val[1])
        wp = self.prec + 2 * _GUARD
        with mpmath.workprec(wp):
            lo = self.mid - self.rad
            hi = self.mid + self.rad
            # rounding of the endpoints, absorbed through the 1-Lipschitz bound
            end_err = _ulp(lo, wp - 1) + _ulp(hi, wp - 1)
        vlo, elo = _sin_cos_point(lo, self.prec)[which]
        vhi, ehi = _sin_cos_point(hi, self.prec)[which]
        err = max(elo, ehi) + end_err
        with mpmath.workprec(wp):
            bottom = min(vlo, vhi)
            top = max(vlo, vhi)
            has_max, has_min = _extrema_inside(lo, hi, which, wp)
            if has_max:
                top = mpf(1)
            if has_min:
                bottom = mpf(-1)
            mid = (top + bottom) / 2
            rad = (top - bottom) / 2 + err
        return self._make(mid, rad)


def _extrema_inside(lo: mpf, hi: mpf, which: int, wp: int) -> tuple[bool, bool]:
    """Whether ``[lo, hi]`` may contain a maximum / minimum of cos (``which=0``) or sin (``which=1``).

    The extrema sit at ``offset + j pi`` (even ``j``: maxima, odd ``j``: minima)
    with offset ``0`` for cos and ``pi / 2`` for sin.  Decisions near the
    boundary err on the side of inclusion.
    """
    pi_val, pi_err = _machin_pi(wp + 8)
    with mpmath.workprec(wp):
        slack = mpmath.ldexp(mpf(1), -(wp // 2))
        offset = pi_val / 2 if which else mpf(0)
        j_first = int(mpmath.ceil((lo - offset) / pi_val - slack))
        j_last = int(mpmath.floor((hi - offset) / pi_val + slack))
    js = range(j_first, j_last + 1)
    if len(js) >= 2:
        return True, True
    if len(js) == 1:
        return js[0] % 2 == 0, js[0] % 2 == 1
    return False, False


@lru_cache(maxsize=16)
def pi_ball(prec: int = DEFAULT_PREC) -> Ball:
    """Enclosure of pi by Machin's formula with alternating-series error bounds."""
    wp = prec + 2 * _GUARD
    value, err = _machin_pi(wp)
    mid, rerr = _round(value, prec)
    return Ball(mid, _up(err + rerr), prec)


def _atan_inv(k: int, wp: int) -> tuple[mpf, mpf]:
    """``atan(1/k)`` by its alternating series; returns value and error bound."""
    with mpmath.workprec(wp):
        x = mpf(1) / k
        x2 = x * x
        term = x
        total = mpf(0)
        n = 0
        eps = mpmath.ldexp(mpf(1), -wp)
        while True:
            t = term / (2 * n + 1)
            if t < eps:
                break
            total += t if n % 2 == 0 else -t
            term *= x2
            n += 1
        # truncation (next term) plus accumulated rounding
        return total, t + (n + 2) * 4 * eps


def _machin_pi(wp: int) -> tuple[mpf, mpf]:
    a, ea = _atan_inv(5, wp)
    b, eb = _atan_inv(239, wp)
    with mpmath.workprec(wp):
        return 16 * a - 4 * b, 16 * ea + 4 * eb + 8 * mpmath.ldexp(mpf(1), -wp)


def _sin_cos_point(x: mpf, prec: int) -> tuple[tuple[mpf, mpf], tuple[mpf, mpf]]:
    """((cos x, err), (sin x, err)) at a point, errors bounding the total deviation."""
    wp = prec + 2 * _GUARD
    with mpmath.workprec(wp + 16):
        mag = int(mpmath.frexp(abs(x))[1]) if x else 0
    wp += max(mag, 0)
    pi_val, pi_err = _machin_pi(wp + 8)
    with mpmath.workprec(wp):
        half_pi = pi_val / 2
        k = int(mpmath.nint(x / half_pi))
        r = x - k * half_pi
        red_err = abs(k) * pi_err / 2 + 4 * mpmath.ldexp(mpf(1), -wp) * (1 + abs(x))
        s, c, series_err = _taylor_sin_cos(r, wp)
        err = series_err + red_err  # both functions are 1-Lipschitz in the reduced argument
        quadrant = k % 4
        if quadrant == 0:
            cv, sv = c, s
        elif quadrant == 1:
            cv, sv = -s, c
        elif quadrant == 2:
            cv, sv = -c, -s
        else:
            cv, sv = s, -c
    return (cv, err), (sv, err)


def _taylor_sin_cos(r: mpf, wp: int) -> tuple[mpf, mpf, mpf]:
    """Taylor series of sin and cos for ``|r| <= 1``; error covers truncation and rounding."""
    if abs(r) > 1:
        raise BallError("reduced argument out of range")
    eps = mpmath.ldexp(mpf(1), -wp)
    with mpmath.workprec(wp):
        s = mpf(0)
        c = mpf(0)
        term = mpf(1)  # r^n / n!
        n = 0
        while True:
            if n % 4 == 0:
                c += term
            elif n % 4 == 1:
                s += term
            elif n % 4 == 2:
                c -= term
            else:
                s -= term
            n += 1
            term = term * r / n
            if abs(term) < eps:
                break
        # remainder of either series after index n is at most |term| (alternating, |r| <= 1)
        err = 2 * abs(term) + (2 * n + 8) * eps
    return s, c, err


def ball_from_rational(q: Rational, prec: int = DEFAULT_PREC) -> Ball:
    return Ball.exact_rational(q, prec)


def ball_hull(lo: Rational, hi: Rational, prec: int = DEFAULT_PREC) -> Ball:
    return Ball.hull(lo, hi, prec)


def cos2pi(x: Ball) -> Ball:
    """``cos(2 pi x)``."""
    return (2 * x * pi_ball(x.prec)).cos()


def sin2pi(x: Ball) -> Ball:
    """``sin(2 pi x)``."""
    return (2 * x * pi_ball(x.prec)).sin()
