"""
Reference greedy pursuits for emp_cs: MP, OMP, CoSaMP and ROMP.

Every pursuit takes a column-normalized matrix A, measurements y and a
StopRule, and returns a RecoveryResult. Coefficients are computed in the
normalized-column domain and mapped back through the optional `scales`
(column norms removed from A) and `psi` (representation basis) keywords.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from emp_cs.core.config import config
from emp_cs.core.linalg import Mat, Vec, as_matrix, as_vector, least_squares
from emp_cs.recovery.error_handling import BadDimension, BadParameter, DimensionMismatch
from emp_cs.recovery.model import RecoveryResult, StopRule, Termination

logger = logging.getLogger(__name__)

UNIT_COLUMN_TOLERANCE = 1e-8


def estimate_sparsity(m: int, n: int) -> int:
    """
    Sparsity guess K = M / (2 ln N) used when the true sparsity is unknown.

    Args:
        m (int): Number of measurements
        n (int): Signal dimension

    Returns:
        int: Estimate rounded half-up, at least 1
    """
    if m < 1 or n < 2:
        raise BadDimension(f"need m >= 1 and n >= 2, got m={m}, n={n}")
    return max(1, int(math.floor(m / (2.0 * math.log(n)) + 0.5)))


def prepare_operands(a: ArrayLike, y: ArrayLike) -> Tuple[Mat, Vec]:
    """
    Validate a column-normalized matrix and a matching measurement vector.

    Args:
        a (ArrayLike): M x N matrix with unit-norm columns
        y (ArrayLike): Length-M measurements

    Returns:
        Tuple[Mat, Vec]: Validated float64 operands
    """
    a = as_matrix(a, "A")
    y = as_vector(y, "y")
    if a.shape[0] != y.shape[0]:
        raise DimensionMismatch(a.shape[0], y.shape[0], what="measurement length")

    norms = np.linalg.norm(a, axis=0)
    if np.any(np.abs(norms - 1.0) > UNIT_COLUMN_TOLERANCE):
        raise BadParameter("pursuits require a column-normalized matrix")
    return a, y


def build_result(
    chat_work: Vec,
    *,
    iterations: int,
    termination: Termination,
    residual_trace: List[float],
    support: Sequence[int],
    entropy_trace: Optional[List[float]] = None,
    index_trace: Optional[List[int]] = None,
    coefficient_trace: Optional[List[float]] = None,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    Map working-domain coefficients back to the original scaling.

    Args:
        chat_work (Vec): Coefficients of the column-normalized matrix
        scales (Optional[ArrayLike]): Column norms removed from A
        psi (Optional[ArrayLike]): Representation basis; identity when omitted

    Returns:
        RecoveryResult: Result with chat = chat_work / scales and shat = psi chat
    """
    n = chat_work.shape[0]
    chat = chat_work.copy()
    if scales is not None:
        scales = as_vector(scales, "scales")
        if scales.shape[0] != n:
            raise DimensionMismatch(n, scales.shape[0], what="scales length")
        chat = chat / scales

    shat = chat.copy()
    if psi is not None:
        psi = as_matrix(psi, "psi")
        if psi.shape[1] != n:
            raise DimensionMismatch(n, psi.shape[1], what="psi columns")
        shat = psi @ chat

    return RecoveryResult(
        chat=chat,
        shat=shat,
        iterations=iterations,
        residual_trace=residual_trace,
        entropy_trace=entropy_trace or [],
        index_trace=index_trace or [],
        coefficient_trace=coefficient_trace or [],
        support=tuple(int(j) for j in support),
        termination=termination,
    )


def _residual_termination(stop: StopRule, norm: float, floor: float) -> Optional[Termination]:
    if norm <= floor or (stop.uses_threshold and norm <= stop.epsilon):
        return Termination.RESIDUAL_BELOW_EPSILON
    return None


def _top_indices(values: Vec, count: int) -> np.ndarray:
    """Indices of the `count` largest magnitudes, ties to the lowest index."""
    return np.argsort(-np.abs(values), kind="stable")[:count]


def _resolve_k(k: Optional[int], stop: StopRule) -> int:
    k = k if k is not None else stop.k
    if k is None or k < 1:
        raise BadParameter("sparsity level k must be given and positive")
    return k


def mp_recover(
    a: ArrayLike,
    y: ArrayLike,
    stop: StopRule,
    *,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    Matching pursuit: add the best-correlated atom's projection to the estimate.

    Under a known sparsity K the run stops instead of adding a (K+1)-th
    distinct atom; atoms already in the support may be refined repeatedly.
    """
    a, y = prepare_operands(a, y)
    m, n = a.shape
    max_iter = stop.resolve_max_iter(m)
    floor = config.RESIDUAL_FLOOR * float(np.linalg.norm(y))

    chat = np.zeros(n)
    r = y.copy()
    residuals = [float(np.linalg.norm(r))]
    indices: List[int] = []
    coefficients: List[float] = []
    support: List[int] = []

    while True:
        termination = _residual_termination(stop, residuals[-1], floor)
        if termination:
            break
        if len(indices) >= max_iter:
            termination = Termination.ITERATION_CAP
            break

        corr = a.T @ r
        j = int(np.argmax(np.abs(corr)))
        if abs(corr[j]) < config.CORRELATION_FLOOR:
            termination = Termination.NO_ADMISSIBLE_ATOM
            break
        if stop.uses_sparsity and j not in support and len(support) >= stop.k:
            termination = Termination.SPARSITY_REACHED
            break

        c = float(corr[j])
        chat[j] += c
        r = r - c * a[:, j]
        if j not in support:
            support.append(j)
        indices.append(j)
        coefficients.append(c)
        residuals.append(float(np.linalg.norm(r)))

    logger.debug(f"MP stopped after {len(indices)} iterations: {termination.value}")
    return build_result(
        chat,
        iterations=len(indices),
        termination=termination,
        residual_trace=residuals,
        support=support,
        index_trace=indices,
        coefficient_trace=coefficients,
        scales=scales,
        psi=psi,
    )


def omp_recover(
    a: ArrayLike,
    y: ArrayLike,
    stop: StopRule,
    *,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    Orthogonal matching pursuit: grow the support one atom at a time and
    re-fit all selected coefficients by least squares.
    """
    a, y = prepare_operands(a, y)
    m, n = a.shape
    max_iter = stop.resolve_max_iter(m)
    floor = config.RESIDUAL_FLOOR * float(np.linalg.norm(y))

    support: List[int] = []
    x = np.zeros(0)
    r = y.copy()
    residuals = [float(np.linalg.norm(r))]

    while True:
        termination = _residual_termination(stop, residuals[-1], floor)
        if termination:
            break
        if stop.uses_sparsity and len(support) >= stop.k:
            termination = Termination.SPARSITY_REACHED
            break
        if len(support) >= max_iter:
            termination = Termination.ITERATION_CAP
            break

        corr = a.T @ r
        corr[support] = 0.0
        j = int(np.argmax(np.abs(corr)))
        if abs(corr[j]) < config.CORRELATION_FLOOR:
            termination = Termination.NO_ADMISSIBLE_ATOM
            break

        support.append(j)
        x = least_squares(a[:, support], y)
        r = y - a[:, support] @ x
        residuals.append(float(np.linalg.norm(r)))

    chat = np.zeros(n)
    chat[support] = x
    logger.debug(f"OMP stopped with {len(support)} atoms: {termination.value}")
    return build_result(
        chat,
        iterations=len(support),
        termination=termination,
        residual_trace=residuals,
        support=support,
        index_trace=list(support),
        scales=scales,
        psi=psi,
    )


def cosamp_recover(
    a: ArrayLike,
    y: ArrayLike,
    k: Optional[int],
    stop: StopRule,
    *,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    Compressive sampling matching pursuit.

    Each iteration merges the 2k strongest proxy entries with the current
    support, fits by least squares, prunes to the k largest coefficients and
    recomputes the residual. A pass that fails to lower the residual ends the
    run with ResidualStagnation; a worse estimate is discarded.
    """
    a, y = prepare_operands(a, y)
    k = _resolve_k(k, stop)
    m, n = a.shape
    max_iter = stop.resolve_max_iter(m)
    floor = config.RESIDUAL_FLOOR * float(np.linalg.norm(y))

    chat = np.zeros(n)
    support = np.zeros(0, dtype=int)
    r = y.copy()
    residuals = [float(np.linalg.norm(r))]
    iterations = 0

    while True:
        termination = _residual_termination(stop, residuals[-1], floor)
        if termination:
            break
        if iterations >= max_iter:
            termination = Termination.ITERATION_CAP
            break

        proxy = a.T @ r
        merged = np.union1d(_top_indices(proxy, 2 * k), support)
        b = least_squares(a[:, merged], y)
        keep = _top_indices(b, k)

        candidate = np.zeros(n)
        candidate[merged[keep]] = b[keep]
        candidate_r = y - a @ candidate
        candidate_norm = float(np.linalg.norm(candidate_r))

        previous_norm = residuals[-1]
        if candidate_norm < previous_norm:
            chat = candidate
            r = candidate_r
            support = np.sort(merged[keep])
            iterations += 1
            residuals.append(candidate_norm)
        if candidate_norm >= previous_norm * (1.0 - config.TIE_TOLERANCE):
            termination = Termination.RESIDUAL_STAGNATION
            break

    logger.debug(f"CoSaMP stopped after {iterations} iterations: {termination.value}")
    return build_result(
        chat,
        iterations=iterations,
        termination=termination,
        residual_trace=residuals,
        support=support.tolist(),
        scales=scales,
        psi=psi,
    )


def romp_regularize(magnitudes: ArrayLike) -> np.ndarray:
    """
    Maximal-energy group of comparable magnitudes (max <= 2 * min).

    Args:
        magnitudes (ArrayLike): Non-negative correlation magnitudes

    Returns:
        np.ndarray: Positions into `magnitudes` of the chosen group
    """
    mags = np.abs(as_vector(magnitudes, "magnitudes"))
    order = np.argsort(-mags, kind="stable")
    sorted_mags = mags[order]

    best_energy = -1.0
    best = (0, 1)
    for start in range(sorted_mags.size):
        end = start
        while end + 1 < sorted_mags.size and sorted_mags[start] <= 2.0 * sorted_mags[end + 1]:
            end += 1
        energy = float(np.sum(sorted_mags[start : end + 1] ** 2))
        if energy > best_energy:
            best_energy = energy
            best = (start, end + 1)
    return order[best[0] : best[1]]


def romp_recover(
    a: ArrayLike,
    y: ArrayLike,
    k: Optional[int],
    stop: StopRule,
    *,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    Regularized orthogonal matching pursuit.

    Each iteration takes the k strongest correlations, keeps the
    maximal-energy group of comparable magnitudes, adds it to the support and
    re-fits by least squares, until the support holds 2k atoms or the stop
    rule fires.
    """
    a, y = prepare_operands(a, y)
    k = _resolve_k(k, stop)
    m, n = a.shape
    max_iter = stop.resolve_max_iter(m)
    floor = config.RESIDUAL_FLOOR * float(np.linalg.norm(y))

    support: List[int] = []
    x = np.zeros(0)
    r = y.copy()
    residuals = [float(np.linalg.norm(r))]
    iterations = 0

    while True:
        termination = _residual_termination(stop, residuals[-1], floor)
        if termination:
            break
        if len(support) >= 2 * k:
            termination = Termination.SPARSITY_REACHED
            break
        if iterations >= max_iter:
            termination = Termination.ITERATION_CAP
            break

        u = a.T @ r
        u[support] = 0.0
        candidates = _top_indices(u, k)
        candidates = candidates[np.abs(u[candidates]) >= config.CORRELATION_FLOOR]
        if candidates.size == 0:
            termination = Termination.NO_ADMISSIBLE_ATOM
            break

        group = candidates[romp_regularize(np.abs(u[candidates]))]
        support.extend(sorted(int(j) for j in group))
        x = least_squares(a[:, support], y)
        r = y - a[:, support] @ x
        iterations += 1
        residuals.append(float(np.linalg.norm(r)))

    chat = np.zeros(n)
    chat[support] = x
    logger.debug(f"ROMP stopped with {len(support)} atoms: {termination.value}")
    return build_result(
        chat,
        iterations=iterations,
        termination=termination,
        residual_trace=residuals,
        support=support,
        scales=scales,
        psi=psi,
    )
