"""Small dense kernels: Cholesky, partial-pivot LU, cyclic Jacobi, numerical rank.

Matrices are plain 2-D ``float64`` numpy arrays. Problem sizes in this package
stay at desk scale (N <= 25, M <= 1000), so straightforward row-oriented loops
with vectorised inner updates are fast enough.
"""
from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch, NonSymmetric, NotPositiveDefinite, Singular

PIVOT_TOL = 1e-12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D float array, raising ``ValueError`` otherwise."""
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def _as_square(a) -> np.ndarray:
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _check_symmetric(a: np.ndarray, rel_tol: float) -> None:
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > rel_tol * scale:
        raise NonSymmetric("matrix is not symmetric")


def _rhs(b, n: int) -> np.ndarray:
    rhs = np.array(b, dtype=float)
    if rhs.shape[0] != n:
        raise DimensionMismatch(f"right-hand side has length {rhs.shape[0]}, expected {n}")
    return rhs


def cholesky(a) -> np.ndarray:
    """Lower-triangular ``L`` with ``a = L @ L.T``."""
    a = _as_square(a)
    n = a.shape[0]
    low = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if pivot <= 0.0:
            raise NotPositiveDefinite(f"non-positive pivot {pivot:.3e} at column {j}")
        low[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low


def _forward(low: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = np.array(b, dtype=float)
    for i in range(low.shape[0]):
        x[i] = (x[i] - low[i, :i] @ x[:i]) / low[i, i]
    return x


def _backward(up: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = up.shape[0]
    x = np.array(b, dtype=float)
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - up[i, i + 1:] @ x[i + 1:]) / up[i, i]
    return x


def cholesky_solve(low: np.ndarray, b) -> np.ndarray:
    """Solve ``L L^T x = b`` given the Cholesky factor ``L``."""
    return _backward(low.T, _forward(low, _rhs(b, low.shape[0])))


def solve_spd(a, b) -> np.ndarray:
    """Solve ``a x = b`` for symmetric positive-definite ``a`` via Cholesky."""
    a = _as_square(a)
    _check_symmetric(a, 1e-12)
    return cholesky_solve(cholesky(a), b)


def lu_factor(a, pivot_tol: float = PIVOT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Doolittle LU with partial pivoting, packed into one array plus a row permutation.

    Raises ``Singular`` when a pivot falls below ``pivot_tol`` times the
    largest entry of ``a``.
    """
    lu = _as_square(a).copy()
    n = lu.shape[0]
    perm = np.arange(n)
    scale = float(np.max(np.abs(lu)))
    if scale == 0.0:
        raise Singular("zero matrix")
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < pivot_tol * scale:
            raise Singular(f"pivot {abs(lu[p, k]):.3e} below tolerance at column {k}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_solve(factor: tuple[np.ndarray, np.ndarray], b) -> np.ndarray:
    """Solve with a factor from :func:`lu_factor`; ``b`` may be a vector or a matrix."""
    lu, perm = factor
    n = lu.shape[0]
    x = _rhs(b, n)[perm].copy()
    for i in range(n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def lu_solve_transposed(factor: tuple[np.ndarray, np.ndarray], b) -> np.ndarray:
    """Solve ``a.T x = b`` reusing the factor of ``a``."""
    lu, perm = factor
    n = lu.shape[0]
    z = _rhs(b, n).copy()
    # a[perm] = L U  =>  a.T = U.T L.T P
    for i in range(n):
        z[i] = (z[i] - lu[:i, i] @ z[:i]) / lu[i, i]
    for i in range(n - 1, -1, -1):
        z[i] -= lu[i + 1:, i] @ z[i + 1:]
    x = np.empty_like(z)
    x[perm] = z
    return x


def solve_lu(a, b, pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    """Solve a general square system with partial pivoting."""
    return lu_solve(lu_factor(a, pivot_tol), b)


def sym_eigen(a, tol: float = 1e-10, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.
    """
    a = _as_square(a)
    _check_symmetric(a, tol)
    work = 0.5 * (a + a.T)
    n = work.shape[0]
    vecs = np.eye(n)
    norm = np.linalg.norm(work)
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, np.sum(work * work) - np.sum(np.diag(work) ** 2)))
        if off <= 1e-15 * max(norm, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (work[q, q] - work[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = work[:, p].copy()
                col_q = work[:, q]
                work[:, p] = c * col_p - s * col_q
                work[:, q] = s * col_p + c * col_q
                row_p = work[p, :].copy()
                row_q = work[q, :]
                work[p, :] = c * row_p - s * row_q
                work[q, :] = s * row_p + c * row_q
                work[p, q] = work[q, p] = 0.0
                vp = vecs[:, p].copy()
                vecs[:, p] = c * vp - s * vecs[:, q]
                vecs[:, q] = s * vp + c * vecs[:, q]
    vals = np.diag(work).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


def rank(a, tol: float = PIVOT_TOL) -> int:
    """Numerical rank by Gaussian elimination with complete pivoting.

    Elimination stops once the largest remaining entry drops below
    ``tol`` times the first (largest) pivot.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    work = as_matrix(a).copy()
    rows, cols = work.shape
    first = float(np.max(np.abs(work)))
    if first == 0.0:
        return 0
    r = 0
    for k in range(min(rows, cols)):
        sub = np.abs(work[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] < tol * first:
            break
        i += k
        j += k
        work[[k, i]] = work[[i, k]]
        work[:, [k, j]] = work[:, [j, k]]
        factors = work[k + 1:, k] / work[k, k]
        work[k + 1:, k:] -= np.outer(factors, work[k, k:])
        r += 1
    return r

