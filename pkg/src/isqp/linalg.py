"""Dense linear-algebra kernel used by every other module.

Matrices are plain 2-D ``numpy.ndarray`` objects in row-major order.  The
systems solved here are tiny (tens of unknowns), so the factorizations are
written for clarity and strict error contracts rather than speed: LU with
partial pivoting reports near-singularity through an explicit pivot floor,
and Cholesky doubles as the positive-definiteness test for curvature
matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPositiveDefiniteError, SingularMatrixError

# Pivot floor for both factorizations, relative to the row-sum norm.
PIVOT_FLOOR = 1e-14
# Post-condition on every solve: inf-norm residual relative to max(1, |b|).
RESIDUAL_TOL = 1e-10
# Symmetry slack allowed on inputs that must be symmetric.
SYMMETRY_TOL = 1e-12


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_symmetric(a: np.ndarray) -> None:
    """Raise ValueError unless |a_ij - a_ji| <= tol * max(1, |a_ij|)."""
    bound = SYMMETRY_TOL * np.maximum(1.0, np.abs(a))
    if np.any(np.abs(a - a.T) > bound):
        raise ValueError("matrix is not symmetric within tolerance")


def _check_residual(a: np.ndarray, x: np.ndarray, b: np.ndarray) -> None:
    residual = np.max(np.abs(a @ x - b), initial=0.0)
    assert residual <= RESIDUAL_TOL * max(1.0, np.max(np.abs(b), initial=0.0)), (
        f"solve residual {residual:.3e} exceeds tolerance"
    )


class LuFactorization:
    """LU factors of a square matrix with partial pivoting.

    Raises SingularMatrixError at construction when any pivot magnitude
    falls below PIVOT_FLOOR times the row-sum norm of the input.
    """

    def __init__(self, a) -> None:
        a = _as_square(a)
        n = a.shape[0]
        norm = np.max(np.sum(np.abs(a), axis=1), initial=0.0)
        if n > 0 and norm == 0.0:
            raise SingularMatrixError("zero matrix")
        floor = PIVOT_FLOOR * norm
        lu = a.copy()
        order = np.arange(n)
        for k in range(n):
            p = k + int(np.argmax(np.abs(lu[k:, k])))
            if abs(lu[p, k]) < floor:
                raise SingularMatrixError(
                    f"pivot {lu[p, k]:.3e} below floor {floor:.3e} at column {k}"
                )
            if p != k:
                lu[[k, p]] = lu[[p, k]]
                order[[k, p]] = order[[p, k]]
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
        self._a = a
        self._lu = lu
        self._order = order
        self.shape = a.shape

    @property
    def matrix(self) -> np.ndarray:
        """The matrix that was factored (read-only view)."""
        return self._a

    def solve(self, b) -> np.ndarray:
        """Solve A x = b for one right-hand side (1-D) or several (columns)."""
        b = np.asarray(b, dtype=float)
        vector = b.ndim == 1
        x = b.reshape(-1, 1).copy() if vector else np.array(b, dtype=float)
        n = self.shape[0]
        if x.shape[0] != n:
            raise ValueError("right-hand side has wrong length")
        x = x[self._order]
        lu = self._lu
        for k in range(n):  # unit lower-triangular sweep
            x[k + 1:] -= lu[k + 1:, k:k + 1] * x[k:k + 1]
        for k in range(n - 1, -1, -1):  # upper-triangular sweep
            x[k] /= lu[k, k]
            x[:k] -= lu[:k, k:k + 1] * x[k:k + 1]
        if vector:
            x = x.ravel()
        if __debug__:
            _check_residual(self._a, x, b)
        return x


def lu_factor(a) -> LuFactorization:
    """Factor a square matrix once for reuse against several right-hand sides."""
    return LuFactorization(a)


def lu_solve(a, b) -> np.ndarray:
    """Solve the general square system A x = b."""
    return LuFactorization(a).solve(b)


def cholesky(a) -> np.ndarray:
    """Lower-triangular Cholesky factor of a symmetric positive definite matrix.

    Raises NotPositiveDefiniteError when any diagonal pivot is at or below
    the pivot floor, which doubles as the package's SPD test.
    """
    a = _as_square(a)
    check_symmetric(a)
    n = a.shape[0]
    norm = np.max(np.sum(np.abs(a), axis=1), initial=0.0)
    floor = PIVOT_FLOOR * norm
    low = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if pivot <= floor:
            raise NotPositiveDefiniteError(
                f"pivot {pivot:.3e} at column {j} is not positive"
            )
        low[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low


def solve_cholesky(low: np.ndarray, b) -> np.ndarray:
    """Solve (L L^T) x = b given the lower Cholesky factor L."""
    b = np.asarray(b, dtype=float)
    vector = b.ndim == 1
    x = b.reshape(-1, 1).copy() if vector else np.array(b, dtype=float)
    n = low.shape[0]
    if x.shape[0] != n:
        raise ValueError("right-hand side has wrong length")
    for k in range(n):
        x[k] /= low[k, k]
        x[k + 1:] -= low[k + 1:, k:k + 1] * x[k:k + 1]
    for k in range(n - 1, -1, -1):  # transpose sweep: column k of L^T is row k of L
        x[k] /= low[k, k]
        x[:k] -= low[k, :k].reshape(-1, 1) * x[k:k + 1]
    return x.ravel() if vector else x


def spd_solve(m, b) -> np.ndarray:
    """Solve M x = b for symmetric positive definite M."""
    m = _as_square(m)
    x = solve_cholesky(cholesky(m), b)
    if __debug__:
        _check_residual(m, np.asarray(x), np.asarray(b, dtype=float))
    return x
