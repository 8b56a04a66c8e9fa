"""Adaptive Simpson quadrature with Richardson correction."""

from __future__ import annotations

from typing import Callable


class QuadratureError(ArithmeticError):
    pass


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
    initial_panels: int = 8,
) -> float:
    """Integrate ``f`` over ``[a, b]``; each panel is refined until two levels agree to its share of ``tol``."""
    if a == b:
        return 0.0
    h = (b - a) / initial_panels
    total = 0.0
    for k in range(initial_panels):
        lo = a + k * h
        hi = lo + h if k < initial_panels - 1 else b
        mid = 0.5 * (lo + hi)
        flo, fmid, fhi = f(lo), f(mid), f(hi)
        whole = (hi - lo) * (flo + 4.0 * fmid + fhi) / 6.0
        total += _refine(f, lo, hi, flo, fmid, fhi, whole, tol / initial_panels, max_depth)
    return total


def _refine(f, a, b, fa, fm, fb, whole, tol, depth):
    # iterative stack to avoid Python recursion limits on deep refinements
    stack = [(a, b, fa, fm, fb, whole, tol, depth)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        diff = left + right - whole
        if abs(diff) <= 15.0 * tol:
            total += left + right + diff / 15.0
            continue
        if depth <= 0:
            raise QuadratureError(f"adaptive Simpson did not converge on [{a}, {b}]")
        stack.append((a, m, fa, flm, fm, left, tol / 2.0, depth - 1))
        stack.append((m, b, fm, frm, fb, right, tol / 2.0, depth - 1))
    return total
