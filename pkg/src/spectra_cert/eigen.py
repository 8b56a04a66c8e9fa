"""Symmetric eigenvalues with an a-posteriori error bound.

The eigenpairs come from LAPACK (``numpy.linalg.eigh``).  The bound is
derived from the residual ``R = A V - V diag(w)`` and the loss of
orthogonality ``E = I - V^T V``: with ``delta = ||E|| < 1`` the polar factor
``U`` of ``V`` is orthogonal and ``U^T A U`` differs from ``diag(w)`` by at
most

    delta*||w|| + sqrt(1+delta)*||R|| + (2f + f^2) * ((1+delta)||w|| + sqrt(1+delta)||R||),

where ``f = 1/sqrt(1-delta) - 1``.  Weyl's inequality turns this into a
uniform bound on every sorted eigenvalue.  Frobenius norms over-estimate the
spectral norms, and a floating-point slack term covers the rounding made
while forming ``R`` and ``E`` and while converting the input to doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

EPS = np.finfo(float).eps


class AccuracyError(ArithmeticError):
    def __init__(self, achieved: float, target: float):
        self.achieved = achieved
        super().__init__(f"eigenvalue bound {achieved:.3e} exceeds target {target:.3e}")


class SymmetryError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues sorted in descending order, each within ``err`` of the true value."""

    values: tuple[float, ...]
    err: float

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _to_float_matrix(m) -> tuple[np.ndarray, float]:
    """Float copy plus an entrywise bound on the conversion error."""
    if isinstance(m, np.ndarray) and m.dtype.kind == "f":
        return np.array(m, dtype=float), 0.0
    rows = [list(r) for r in m]
    exact = any(isinstance(x, Fraction) for r in rows for x in r)
    a = np.array([[float(x) for x in r] for r in rows], dtype=float).reshape(len(rows), -1)
    if not exact:
        return a, 0.0
    conv = max((abs(x) for r in rows for x in r), default=0)
    return a, float(conv) * EPS


def _check_symmetric(m, a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SymmetryError(f"matrix must be square, got shape {a.shape}")
    if isinstance(m, np.ndarray):
        if not np.array_equal(m, m.T):
            raise SymmetryError("matrix is not exactly symmetric")
        return
    n = a.shape[0]
    rows = [list(r) for r in m]
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise SymmetryError(f"entries ({i},{j}) and ({j},{i}) differ")


def eig_sym(m, target_err: float = 1e-11) -> SpectralData:
    """Eigenvalues of a real symmetric matrix with a certified uniform error bound."""
    a, conv_err = _to_float_matrix(m)
    _check_symmetric(m, a)
    n = a.shape[0]
    if n == 0:
        return SpectralData((), 0.0)
    w, v = np.linalg.eigh(a)
    r = a @ v - v * w
    e = np.eye(n) - v.T @ v
    norm_r = float(np.linalg.norm(r))
    delta = float(np.linalg.norm(e))
    norm_w = float(np.max(np.abs(w)))
    norm_a = float(np.linalg.norm(a))
    # rounding made while forming R and E (entries are length-n dot products)
    slack = 4.0 * n * EPS * (norm_a * math.sqrt(n) + norm_w * math.sqrt(n)) + 4.0 * n * EPS
    norm_r += slack
    delta += 4.0 * n * EPS * math.sqrt(n)
    if delta >= 0.5:
        raise AccuracyError(float("inf"), target_err)
    f = 1.0 / math.sqrt(1.0 - delta) - 1.0
    root = math.sqrt(1.0 + delta)
    base = delta * norm_w + root * norm_r
    big = (1.0 + delta) * norm_w + root * norm_r
    bound = base + (2.0 * f + f * f) * big
    bound += n * conv_err  # Weyl: ||A - fl(A)|| <= n * max entry error
    bound *= 1.0 + 1e-6
    if bound > target_err:
        raise AccuracyError(bound, target_err)
    vals = tuple(float(x) for x in sorted(w, reverse=True))
    return SpectralData(vals, float(bound))


def eig_sym_mp(m, dps: int = 60) -> tuple[list[mpmath.mpf], mpmath.mpf]:
    """High-precision eigenvalues (descending) with the same style of residual bound."""
    with mpmath.workdps(dps):
        rows = [[mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x) for x in r] for r in m]
        a = mpmath.matrix(rows)
        n = a.rows
        if n == 0:
            return [], mpmath.mpf(0)
        w, v = mpmath.eigsy(a)
        r = a * v - v * mpmath.diag(w)
        e = mpmath.eye(n) - v.T * v
        norm_r = mpmath.mnorm(r, "f")
        delta = mpmath.mnorm(e, "f")
        norm_w = max(abs(x) for x in w)
        slack = mpmath.mpf(10) ** (-(dps - 5)) * (1 + mpmath.mnorm(a, "f")) * n
        norm_r += slack
        delta += slack
        f = 1 / mpmath.sqrt(1 - delta) - 1
        root = mpmath.sqrt(1 + delta)
        bound = delta * norm_w + root * norm_r + (2 * f + f * f) * ((1 + delta) * norm_w + root * norm_r)
        vals = sorted((w[i] for i in range(n)), reverse=True)
        return vals, bound


def eigvals_desc(m: Sequence[Sequence[float]]) -> np.ndarray:
    """Plain descending eigenvalues without a certificate (for plotting and sampling)."""
    return np.sort(np.linalg.eigvalsh(np.asarray(m, dtype=float)))[::-1]
