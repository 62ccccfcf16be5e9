"""
Dense linear-algebra substrate for emp_cs.

Vectors and matrices are plain 64-bit numpy arrays. The helpers here enforce
the finite-entry invariant, normalize vectors and dictionary columns, and solve
the least-squares sub-problems of the orthogonal pursuits with a
column-pivoted (rank-revealing) QR factorization.
"""

import logging
from typing import Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from emp_cs.core.config import config
from emp_cs.recovery.error_handling import (
    DimensionMismatch,
    NonFiniteEntry,
    RankDeficient,
    ZeroColumn,
    ZeroVector,
)

logger = logging.getLogger(__name__)

Vec = NDArray[np.float64]
Mat = NDArray[np.float64]


def as_vector(x: ArrayLike, what: str = "vector") -> Vec:
    """
    Convert input to a finite 1-D float64 array.

    Args:
        x (ArrayLike): Input entries
        what (str): Name used in error messages

    Returns:
        Vec: Finite float64 vector
    """
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatch(1, v.ndim, what=f"{what} rank")
    if not np.all(np.isfinite(v)):
        raise NonFiniteEntry(f"{what} contains NaN or Inf")
    return v


def as_matrix(x: ArrayLike, what: str = "matrix") -> Mat:
    """
    Convert input to a finite 2-D float64 array.

    Args:
        x (ArrayLike): Input entries
        what (str): Name used in error messages

    Returns:
        Mat: Finite float64 matrix
    """
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(2, a.ndim, what=f"{what} rank")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry(f"{what} contains NaN or Inf")
    return a


def inner(u: ArrayLike, v: ArrayLike) -> float:
    """Standard dot product of two equal-length vectors."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionMismatch(u.shape[0], v.shape[0], what="inner product")
    return float(np.dot(u, v))


def normalize_l2(v: ArrayLike) -> Tuple[Vec, float]:
    """
    Scale a vector to unit l2 norm.

    Args:
        v (ArrayLike): Input vector

    Returns:
        Tuple[Vec, float]: (unit vector, original norm)
    """
    v = as_vector(v)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroVector()
    return v / norm, norm


def column_normalize(a: ArrayLike) -> Tuple[Mat, Vec]:
    """
    Scale every column of a matrix to unit l2 norm.

    Args:
        a (ArrayLike): Input matrix

    Returns:
        Tuple[Mat, Vec]: (normalized matrix, per-column norms removed)
    """
    a = as_matrix(a)
    scales = np.linalg.norm(a, axis=0)
    zero = np.flatnonzero(scales == 0.0)
    if zero.size:
        raise ZeroColumn(int(zero[0]))
    return a / scales, scales


def least_squares(a_sub: ArrayLike, y: ArrayLike) -> Vec:
    """
    Solve min_x ||y - a_sub x||_2 for a full-column-rank sub-matrix.

    The rank is read off the diagonal of a column-pivoted QR factorization;
    diagonal entries below RANK_TOLERANCE times the largest one mark the
    selected columns as dependent.

    Args:
        a_sub (ArrayLike): M x k matrix of selected atoms
        y (ArrayLike): Length-M right-hand side

    Returns:
        Vec: Length-k coefficient vector
    """
    a_sub = as_matrix(a_sub, "sub-matrix")
    y = as_vector(y, "y")
    rows, cols = a_sub.shape
    if rows != y.shape[0]:
        raise DimensionMismatch(rows, y.shape[0], what="least-squares rhs")
    if cols == 0:
        return np.zeros(0)
    if cols > rows:
        raise RankDeficient(rows, cols)

    q, r, perm = scipy.linalg.qr(a_sub, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > config.RANK_TOLERANCE * diag[0])) if diag[0] > 0 else 0
    if rank < cols:
        logger.debug(f"Rank-deficient sub-problem: rank {rank} of {cols} columns")
        raise RankDeficient(rank, cols)

    z = scipy.linalg.solve_triangular(r, q.T @ y)
    x = np.empty(cols)
    x[perm] = z
    return x
