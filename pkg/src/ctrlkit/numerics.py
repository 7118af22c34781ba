"""Small dense linear-algebra helpers and a tiny quadratic-program solver.

Everything operates on plain numpy arrays and is deterministic: eigenvalue
output is sorted, the rank-one factorization is closed form, and the QP
solver enumerates active sets exhaustively instead of iterating.
"""

from itertools import combinations

import numpy as np


def eigenvalues(m):
    """All eigenvalues of a small square matrix, deterministically ordered.

    Sorted by descending real part, ties broken by descending imaginary
    part, so conjugate pairs appear adjacent with the +imag member first.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > 8:
        raise ValueError("eigenvalues() is intended for small matrices (n <= 8)")
    vals = np.linalg.eigvals(m)
    order = np.lexsort((-vals.imag, -vals.real))
    return [complex(v) for v in vals[order]]


def least_squares(design, target):
    """Solve min_z ||design @ z - target||_2 for a full-column-rank design."""
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float).ravel()
    if design.ndim != 2:
        raise ValueError("design must be a 2-D matrix")
    rows, cols = design.shape
    if rows < cols:
        raise ValueError(f"design must have at least as many rows as columns, got {design.shape}")
    if target.size != rows:
        raise ValueError("target length must match design row count")
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < 1e-10 * sv[0]:
        raise ValueError("design matrix is rank deficient")
    z, *_ = np.linalg.lstsq(design, target, rcond=None)
    return z


def kron_row(v, identity_dim):
    """Block row [v1*I, v2*I, ..., vk*I] with I of size identity_dim.

    This is v^T (x) I, the building block that turns the bilinear
    identification equations into a linear least-squares design matrix.
    """
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("v must be non-empty")
    if identity_dim < 1:
        raise ValueError("identity_dim must be >= 1")
    return np.kron(v, np.eye(int(identity_dim)))


def nnmf_rank1(m):
    """Exact rank-one non-negative factorization m == outer(w, h).

    Normalization convention: ||h||_inf == 1 with the largest entry of h
    exactly 1, so w carries the magnitude.  The zero matrix maps to w = 0
    and h = [1, 0, ..., 0].

    Raises ValueError for negative entries or numerical rank above one.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("input must be a 2-D matrix")
    if (m < 0).any():
        raise ValueError("matrix must be element-wise non-negative")
    if not m.any():
        h = np.zeros(m.shape[1])
        h[0] = 1.0
        return np.zeros(m.shape[0]), h
    # The global maximum entry sits at the crossing of the dominant row and
    # column; scaling that row to peak 1 fixes the normalization.
    i, j = np.unravel_index(int(np.argmax(m)), m.shape)
    h = m[i, :] / m[i, j]
    w = m[:, j].copy()
    if np.max(np.abs(np.outer(w, h) - m)) > 1e-9 * max(1.0, m[i, j]):
        raise ValueError("matrix has numerical rank above one; split it into rank-one terms")
    return w, h


def induced_norm(m):
    """Spectral norm: the matrix norm induced by the Euclidean vector norm."""
    return float(np.linalg.norm(np.atleast_2d(np.asarray(m, dtype=float)), 2))


def cond(m):
    """Spectral condition number ||m|| * ||m^-1|| of an invertible matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= 1e-12 * sv[0]:
        raise np.linalg.LinAlgError("matrix is singular to working precision")
    return float(sv[0] / sv[-1])


def qp_small(H, c, A_ineq=None, b_ineq=None):
    """Minimize 1/2 z'Hz + c'z subject to A_ineq @ z <= b_ineq.

    H must be symmetric positive definite and tiny (n <= 3, at most 4
    constraint rows).  Every active set is enumerated in order of size and
    then lexicographically; the KKT equality system of each is solved
    directly and the first candidate that is primal feasible with
    non-negative multipliers is the unique global minimizer.

    Returns the minimizer, or None when the constraints are infeasible.
    """
    H = np.atleast_2d(np.asarray(H, dtype=float))
    c = np.atleast_1d(np.asarray(c, dtype=float)).ravel()
    n = c.size
    if H.shape != (n, n):
        raise ValueError("H must be square and match len(c)")
    if n > 3:
        raise ValueError("qp_small handles at most 3 variables")
    if np.max(np.abs(H - H.T)) > 1e-12 * max(1.0, np.max(np.abs(H))):
        raise ValueError("H must be symmetric")
    try:
        np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        raise ValueError("H must be positive definite") from None

    if A_ineq is None or np.size(A_ineq) == 0:
        A = np.zeros((0, n))
        b = np.zeros(0)
    else:
        A = np.atleast_2d(np.asarray(A_ineq, dtype=float))
        b = np.atleast_1d(np.asarray(b_ineq, dtype=float)).ravel()
    m = A.shape[0]
    if A.shape != (m, n) or b.size != m:
        raise ValueError("constraint shapes are inconsistent")
    if m > 4:
        raise ValueError("qp_small handles at most 4 constraints")

    tol = 1e-9
    for size in range(m + 1):
        for active in combinations(range(m), size):
            As = A[list(active), :]
            kkt = np.block([[H, As.T], [As, np.zeros((size, size))]])
            rhs = np.concatenate([-c, b[list(active)]])
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                continue
            z, lam = sol[:n], sol[n:]
            if lam.size and lam.min() < -tol:
                continue
            if m and np.max(A @ z - b) > tol:
                continue
            return z
    return None
