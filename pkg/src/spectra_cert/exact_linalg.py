"""Exact rational matrix helpers: products, determinants, characteristic polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import RatPoly

Matrix = list[list[Fraction]]


def as_fraction_matrix(a: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out.append([sum((row[k] * b[k][j] for k in range(inner) if row[k]), Fraction(0)) for j in range(cols)])
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matvec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((r[k] * v[k] for k in range(len(v)) if r[k]), Fraction(0)) for r in a]


def det(a: Matrix) -> Fraction:
    """Determinant by Gaussian elimination over the rationals (exact)."""
    n = len(a)
    m = [list(row) for row in a]
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f = f / p
                row_r, row_c = m[r], m[col]
                for k in range(col, n):
                    row_r[k] -= f * row_c[k]
    return result


def charpoly(a: Matrix) -> RatPoly:
    """``det(lambda I - A)`` by the Faddeev-LeVerrier recursion (exact over Q)."""
    n = len(a)
    if all(Fraction(x).denominator == 1 for row in a for x in row):
        return _charpoly_int([[int(x) for x in row] for row in a])
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = identity(n)
    ck = Fraction(1)
    am = [list(r) for r in a]
    for k in range(1, n + 1):
        amk = matmul(am, mk)
        ck = -sum(amk[i][i] for i in range(n)) / k
        coeffs[n - k] = ck
        mk = [[amk[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return RatPoly(coeffs)


def _charpoly_int(a: list[list[int]]) -> RatPoly:
    """Faddeev-LeVerrier over the integers: every division by ``k`` is exact."""
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        cols = list(zip(*mk))
        amk = [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]
        tr = sum(amk[i][i] for i in range(n))
        ck, rem = divmod(-tr, k)
        if rem:
            raise ArithmeticError("non-integral Faddeev-LeVerrier coefficient")
        coeffs[n - k] = ck
        for i in range(n):
            amk[i][i] += ck
        mk = amk
    return RatPoly(coeffs)


def det_one_plus_x(a: Matrix) -> RatPoly:
    """``det(I + x A)`` as a polynomial in ``x``: the reversed characteristic polynomial with signs."""
    n = len(a)
    p = charpoly(a)
    # det(I + xA) = (-x)^n det(-(1/x) I - A) = sum_k p_k (-1)^(n-k) x^(n-k)
    return RatPoly(p[n - j] * (-1) ** j for j in range(n + 1))


def matpow(a: Matrix, k: int) -> Matrix:
    n = len(a)
    result = identity(n)
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def int_matpow_trace(a: Sequence[Sequence[int]], k: int) -> int:
    """Trace of an integer matrix power (closed-walk counts), in exact integer arithmetic."""
    n = len(a)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(map(int, r)) for r in a]
    while k:
        if k & 1:
            result = [[sum(result[i][t] * base[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        base = [[sum(base[i][t] * base[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        k >>= 1
    return sum(result[i][i] for i in range(n))


def solve(a: Matrix, b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``A x = b`` exactly; raises on singular ``A``."""
    n = len(a)
    m = [list(a[i]) + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    cols = [solve(a, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return transpose(cols)
