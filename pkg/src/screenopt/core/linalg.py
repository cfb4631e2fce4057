"""Dense symmetric linear algebra for information matrices.

Matrices here are small (p + b up to a few hundred), dense and symmetric. A
Cholesky factorization doubles as the positive-definiteness test: a pivot
at or below 1e-12 times the largest diagonal entry means the design cannot
estimate every effect.

The rank-two inverse update implements a row exchange on L:

    L~'L~ = L'L + l_new l_new' - l_old l_old'
    (L~'L~)^-1 = D - D L01 (I2 + L02' D L01)^-1 L02' D

with L01 = (l_new, -l_old) and L02 = (l_new, l_old). The determinant of the
2 x 2 capacitance matrix equals the determinant ratio of the exchange.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from screenopt.errors import ErrorCode, InconsistentSpecError, NotPositiveDefiniteError, SingularUpdateError

_SYMMETRY_TOL: float = 1e-9
_PIVOT_TOL: float = 1e-12
_CAPACITANCE_TOL: float = 1e-12


@dataclass(frozen=True, eq=False)
class SymFactorization:
    """Upper Cholesky factor of a symmetric positive-definite matrix.

    Attributes:
        dim: Matrix dimension.
        factor: Upper-triangular factor c with S = c'c.
    """

    dim: int
    factor: np.ndarray

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve S x = rhs for a vector or matrix right-hand side."""
        return np.asarray(cho_solve((self.factor, False), np.asarray(rhs, dtype=np.float64)))

    def inverse(self) -> np.ndarray:
        """Symmetrised inverse of S."""
        inv = self.solve(np.eye(self.dim))
        return 0.5 * (inv + inv.T)

    def logdet(self) -> float:
        return float(2.0 * np.sum(np.log(np.diag(self.factor))))


def _as_square(s: np.ndarray) -> np.ndarray:
    matrix = np.asarray(s, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise InconsistentSpecError(
            message=f"Expected a non-empty square matrix, got shape {matrix.shape}.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    return matrix


def sym_factorize(s: np.ndarray) -> SymFactorization:
    """Cholesky-factorize a symmetric matrix, rejecting non-positive-definite input.

    Args:
        s: Symmetric matrix.

    Returns:
        SymFactorization usable for solves, inverses and log-determinants.

    Raises:
        InconsistentSpecError: If s is not square or not symmetric within 1e-9 relative.
        NotPositiveDefiniteError: If a pivot is at or below 1e-12 times the largest diagonal entry.
    """
    matrix = _as_square(s)
    scale = float(np.max(np.abs(matrix)))
    if np.max(np.abs(matrix - matrix.T)) > _SYMMETRY_TOL * max(scale, 1.0):
        raise InconsistentSpecError(
            message="Matrix is not symmetric.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    max_diag = float(np.max(np.diag(matrix)))
    if max_diag <= 0.0:
        raise NotPositiveDefiniteError(
            message="Matrix has no positive diagonal entry.",
            error_code=ErrorCode.NOT_POSITIVE_DEFINITE,
        )
    try:
        factor, _ = cho_factor(0.5 * (matrix + matrix.T), lower=False, check_finite=True)
    except LinAlgError as exc:
        raise NotPositiveDefiniteError(
            message="Matrix is not positive definite.",
            error_code=ErrorCode.NOT_POSITIVE_DEFINITE,
        ) from exc

    upper = np.triu(factor)
    pivots = np.diag(upper) ** 2
    if float(np.min(pivots)) <= _PIVOT_TOL * max_diag:
        raise NotPositiveDefiniteError(
            message=f"Smallest pivot {float(np.min(pivots)):.3e} is below the positive-definiteness threshold.",
            error_code=ErrorCode.NOT_POSITIVE_DEFINITE,
        )
    return SymFactorization(dim=matrix.shape[0], factor=upper)


def logdet(s: np.ndarray) -> float:
    """Log-determinant of a symmetric positive-definite matrix.

    Raises:
        NotPositiveDefiniteError: If s is not positive definite.
    """
    return sym_factorize(s).logdet()


def sym_inverse(s: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via its Cholesky factor."""
    return sym_factorize(s).inverse()


def smw_rank2_inverse_update(d: np.ndarray, l_new: np.ndarray, l_old: np.ndarray) -> np.ndarray:
    """Update D = (L'L)^-1 for replacing the model row l_old by l_new.

    Args:
        d: Current inverse information matrix.
        l_new: Incoming model row.
        l_old: Outgoing model row.

    Returns:
        The inverse of L'L + l_new l_new' - l_old l_old'.

    Raises:
        SingularUpdateError: If the 2 x 2 capacitance matrix is singular.
    """
    d = np.asarray(d, dtype=np.float64)
    l_new = np.asarray(l_new, dtype=np.float64)
    l_old = np.asarray(l_old, dtype=np.float64)

    left = np.column_stack((l_new, -l_old))
    right = np.column_stack((l_new, l_old))
    d_left = d @ left
    capacitance = np.eye(2) + right.T @ d_left
    if abs(float(np.linalg.det(capacitance))) <= _CAPACITANCE_TOL:
        raise SingularUpdateError(
            message="Row exchange would make the information matrix singular.",
            error_code=ErrorCode.SINGULAR_UPDATE,
        )
    updated = d - d_left @ np.linalg.solve(capacitance, right.T @ d)
    return 0.5 * (updated + updated.T)
