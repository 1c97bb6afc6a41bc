"""Dense real-symmetric eigendecomposition with certified residuals.

The contract is the certificate, not the factorization algorithm: every
decomposition returned here has been re-multiplied against its matrix and
carries the measured residual max_k ||M g_k - lambda_k g_k||_inf, which must
not exceed tol * n.  The factorization itself is delegated to LAPACK via
``numpy.linalg.eigh`` (normalized Laplacians are dense, tiny, and
well-conditioned, and the downstream exhaustive scans perform millions of
solves).  All checks are recomputed here, so a misbehaving backend cannot
return silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10
ORTHONORMALITY_TOL = 1e-8


class EigenConvergenceError(RuntimeError):
    """Solver failed the residual or orthonormality certificate."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


class SymMatrix:
    """Dense symmetric matrix; the lower triangle mirrors every write."""

    __slots__ = ("_a", "n")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        self.n = n
        self._a = np.zeros((n, n))

    def set(self, i: int, j: int, value: float) -> None:
        self._a[i, j] = value
        self._a[j, i] = value

    def get(self, i: int, j: int) -> float:
        return float(self._a[i, j])

    @classmethod
    def from_array(cls, arr) -> "SymMatrix":
        a = np.asarray(arr, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square array, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("array is not exactly symmetric")
        m = cls(a.shape[0])
        m._a = a.copy()
        return m

    @property
    def array(self) -> np.ndarray:
        view = self._a.view()
        view.flags.writeable = False
        return view

    def __repr__(self) -> str:
        return f"SymMatrix(n={self.n})"


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues, orthonormal eigenvector columns, and the
    measured residual bound."""

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def eigh(m: SymMatrix, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """Full decomposition of a symmetric matrix, certified before return.

    Raises EigenConvergenceError (carrying the measured residual) if the
    residual exceeds tol * n or the eigenvector Gram matrix strays more
    than 1e-8 from the identity.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    a = m.array
    values, vectors = np.linalg.eigh(a)
    order = np.argsort(values, kind="stable")
    values = np.ascontiguousarray(values[order])
    vectors = np.ascontiguousarray(vectors[:, order])
    residual = float(np.max(np.abs(a @ vectors - vectors * values)))
    if residual > tol * m.n:
        raise EigenConvergenceError(
            f"residual {residual:.3e} exceeds {tol:.1e} * n", best_residual=residual)
    gram_err = float(np.max(np.abs(vectors.T @ vectors - np.eye(m.n))))
    if gram_err > ORTHONORMALITY_TOL:
        raise EigenConvergenceError(
            f"eigenvectors not orthonormal: Gram error {gram_err:.3e}", best_residual=residual)
    return EigenDecomposition(
        values=_freeze(values), vectors=_freeze(vectors), residual=residual)


def residual_check(m: SymMatrix, d: EigenDecomposition) -> float:
    """Recompute max_k ||M g_k - lambda_k g_k||_inf for an existing decomposition."""
    if d.values.shape[0] != m.n or d.vectors.shape != (m.n, m.n):
        raise ValueError(
            f"dimension mismatch: matrix n={m.n}, decomposition n={d.values.shape[0]}")
    return float(np.max(np.abs(m.array @ d.vectors - d.vectors * d.values)))
