"""Stability analysis machinery.

Interval matrices and polynomials, Routh-Hurwitz first-column tests,
Kharitonov bounding polynomials, and eigenvalue-perturbation bounds with
the pendulum safe-angle radius they certify.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .numerics import induced_norm

_ZERO_PIVOT = 1e-12


@dataclass(frozen=True)
class IntervalMatrix:
    """Element-wise box of matrices: lower <= member <= upper."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape:
            raise ValueError("lower and upper must share a shape")
        if (lo > hi).any():
            raise ValueError("lower must be element-wise <= upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


@dataclass(frozen=True)
class IntervalPoly:
    """Coefficient box a_i in [lower_i, upper_i], ascending degree."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape:
            raise ValueError("coefficient intervals must have equal degree")
        if (lo > hi).any():
            raise ValueError("lower must be coefficient-wise <= upper")
        if lo[-1] <= 0.0 <= hi[-1]:
            raise ValueError("leading-coefficient interval must exclude zero")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


@dataclass(frozen=True)
class RouthResult:
    stable: bool
    first_column: list
    degenerate: bool


def _binary_shapes(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def elementwise_min(a, b):
    a, b = _binary_shapes(a, b)
    return np.minimum(a, b)


def elementwise_max(a, b):
    a, b = _binary_shapes(a, b)
    return np.maximum(a, b)


def elementwise_abs(a):
    return np.abs(np.asarray(a, dtype=float))


def elementwise_leq(a, b):
    """True iff a <= b in every entry (the partial order on matrices)."""
    a, b = _binary_shapes(a, b)
    return bool(np.all(a <= b))


def elementwise_lt(a, b):
    """True iff a < b strictly in every entry."""
    a, b = _binary_shapes(a, b)
    return bool(np.all(a < b))


def routh_stable(p):
    """Routh-Hurwitz test on ascending coefficients (a0 ... an).

    A negative leading coefficient is normalized away by negating the whole
    polynomial.  A pivot smaller than 1e-12 in magnitude marks the array
    degenerate and the polynomial not (strictly) stable.
    """
    c = np.atleast_1d(np.asarray(p, dtype=float)).ravel()
    while c.size and c[-1] == 0.0:
        c = c[:-1]
    if c.size == 0:
        raise ValueError("zero polynomial has no Routh array")
    if c.size == 1:
        raise ValueError("degree must be at least 1")
    if c[-1] < 0:
        c = -c
    d = c[::-1]  # descending
    n = d.size - 1
    width = (n + 2) // 2
    rows = np.zeros((n + 1, width))
    rows[0, : (n + 2) // 2] = d[0::2]
    rows[1, : (n + 1) // 2] = d[1::2]
    degenerate = False
    for i in range(2, n + 1):
        pivot = rows[i - 1, 0]
        if abs(pivot) < _ZERO_PIVOT:
            degenerate = True
            break
        for j in range(width - 1):
            rows[i, j] = (pivot * rows[i - 2, j + 1] - rows[i - 2, 0] * rows[i - 1, j + 1]) / pivot
    first_column = [float(v) for v in rows[:, 0]]
    stable = (not degenerate) and all(v > 0 for v in first_column)
    return RouthResult(stable=stable, first_column=first_column, degenerate=degenerate)


# Kharitonov coefficient patterns: which residues of the index (mod 4) take
# the lower bound; the rest take the upper bound.
_KHARITONOV_LOWER = ({0, 1}, {0, 3}, {1, 2}, {2, 3})


def kharitonov_polys(ip):
    """The four bounding polynomials of an interval polynomial.

    Ascending coefficients; the patterns repeat with period 4:
    K1=(lo,lo,hi,hi,...), K2=(lo,hi,hi,lo,...), K3=(hi,lo,lo,hi,...),
    K4=(hi,hi,lo,lo,...).
    """
    polys = []
    for lower_at in _KHARITONOV_LOWER:
        coeffs = np.array([ip.lower[i] if i % 4 in lower_at else ip.upper[i]
                           for i in range(ip.lower.size)])
        polys.append(coeffs)
    return polys


def interval_poly_stable(ip):
    """True iff all four Kharitonov bounding polynomials are Routh stable."""
    return all(routh_stable(k).stable for k in kharitonov_polys(ip))


def bauer_fike_check(Ac0, deltaAc):
    """Eigenvalue-perturbation bound radius = cond(S) * ||deltaAc||.

    Returns (radius, holds) where holds reports whether every eigenvalue of
    Ac0 + deltaAc lies within radius of some eigenvalue of Ac0.  A nearly
    non-diagonalizable Ac0 is reported via a warning and the check proceeds.
    """
    Ac0 = np.asarray(Ac0, dtype=float)
    deltaAc = np.asarray(deltaAc, dtype=float)
    vals0, S = np.linalg.eig(Ac0)
    sv = np.linalg.svd(S, compute_uv=False)
    kappa = float(sv[0] / sv[-1])
    if kappa >= 1e8:
        warnings.warn(f"eigenvector matrix condition {kappa:.3g} is near non-diagonalizable; "
                      "the bound may be vacuous", stacklevel=2)
    radius = kappa * induced_norm(deltaAc)
    vals1 = np.linalg.eigvals(Ac0 + deltaAc)
    slack = radius * 1e-9 + 1e-12
    holds = all(np.min(np.abs(v - vals0)) <= radius + slack for v in vals1)
    return float(radius), bool(holds)


def _sip_full_linear(L, g):
    A = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [g / L, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0],
    ])
    B = np.array([0.0, -1.0 / L, 0.0, 1.0])
    return A, B


def sip_closed_loop_perturbation(theta, K, L=1.0, g=10.0):
    """Deviation Ac(theta) - Ac(0) of the 4-state pendulum closed loop.

    Exact trigonometric form (no small-angle guard): the sin(theta)/theta
    deviation enters through e2 e1', the cos(theta) deviation through e2 K'.
    """
    K = np.asarray(K, dtype=float).ravel()
    sinc = 1.0 if theta == 0 else math.sin(theta) / theta
    e1 = np.array([1.0, 0.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0, 0.0])
    dA = (g / L) * (sinc - 1.0) * np.outer(e2, e1)
    dBK = ((1.0 - math.cos(theta)) / L) * np.outer(e2, K)
    return dA - dBK


def sip_theta_safe_radius(K, L=1.0, g=10.0):
    """Largest angle radius certified to keep the closed loop stable.

    sqrt(|Re lambda_1| / (cond(S) * ((g/6L)||e2 e1'|| + (1/2L)||e2 K'||)))
    with lambda_1 the stable eigenvalue of Ac(0) with the largest real part.
    All angles below this radius give Ac(theta) eigenvalues in the open
    left half-plane.
    """
    K = np.asarray(K, dtype=float).ravel()
    A, B = _sip_full_linear(L, g)
    Ac0 = A - np.outer(B, K)
    vals, S = np.linalg.eig(Ac0)
    if vals.real.max() >= 0:
        raise ValueError("closed loop at theta=0 must be stable")
    sv = np.linalg.svd(S, compute_uv=False)
    kappa = float(sv[0] / sv[-1])
    e1 = np.array([1.0, 0.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0, 0.0])
    denom = kappa * ((g / (6 * L)) * induced_norm(np.outer(e2, e1))
                     + (1 / (2 * L)) * induced_norm(np.outer(e2, K)))
    return math.sqrt(-vals.real.max() / denom)
