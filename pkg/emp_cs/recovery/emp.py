"""
Entropy-minimization matching pursuit (EMP) for emp_cs.

EMP is a matching pursuit that picks, at every iteration, the atom whose
update minimizes a weighted sum of the entropy of the trial residual and the
representation entropy of the trial coefficient vector. Only atoms whose
projection removes at least `selection_ratio` of the best available residual
energy compete, so every committed step shortens the residual by a bounded
fraction. Two modes are provided:

- noiseless: fixed weights w1 = N/(N+1), w2 = 1/(N+1); runs until the residual
  drops below epsilon.
- noisy: weights w1 = (M - nnz)/M, w2 = nnz/M recomputed every iteration, and
  an update is committed only while the ratio of successive conditional
  entropies stays below gamma.

All work happens on the unit-norm measurement vector; the saved norm and the
column scales are restored in the returned coefficients.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from numpy.typing import ArrayLike

from emp_cs.core.config import config
from emp_cs.core.linalg import Mat, Vec, as_vector, normalize_l2
from emp_cs.recovery.baselines import build_result, prepare_operands
from emp_cs.recovery.entropy import column_entropies, delta_h, rep_entropy
from emp_cs.recovery.error_handling import (
    BadDimension,
    BadParameter,
    DegenerateHistory,
    DimensionMismatch,
    NegativeWeight,
    NoAdmissibleAtom,
    NonPositiveGamma,
)
from emp_cs.recovery.model import EmpConfig, RecoveryResult, Termination

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmpWeights:
    """Weights of the residual and coefficient entropies in the EMP objective."""

    w1: float
    w2: float

    @classmethod
    def noiseless(cls, n: int) -> "EmpWeights":
        return cls(w1=n / (n + 1.0), w2=1.0 / (n + 1.0))

    @classmethod
    def noisy(cls, m: int, nnz: int) -> "EmpWeights":
        return cls(w1=(m - nnz) / m, w2=nnz / m)


@dataclass(frozen=True)
class ScanResult:
    """Winning candidate of one EMP scan."""

    j0: int
    c: float
    h_cond: float
    residual: Vec
    residual_norm: float


def emp_candidate_scan(
    a: Mat,
    y: Vec,
    yhat: Vec,
    chat: Vec,
    r: Vec,
    weights: EmpWeights,
    floor: float = config.CORRELATION_FLOOR,
    selection_ratio: float = config.SELECTION_RATIO,
) -> ScanResult:
    """
    Score every atom by the weighted conditional entropy of its update.

    Projecting r onto A_j removes the energy c^2 = <r, A_j>^2, so the trial
    residual e = r - c A_j has ||e||^2 = ||r||^2 - c^2. A candidate is
    admissible when |c| exceeds the floor, its energy drop exceeds
    MIN_ENERGY_DROP * ||r||^2, and the drop is at least `selection_ratio`
    times the largest drop on offer. Trial residuals are scored relative to
    ||y||, so their entropy shrinks with their energy.

    Among admissible candidates the smallest score wins; scores within
    TIE_TOLERANCE of it tie, and ties go to the shorter trial residual and
    then to the lowest index.

    Args:
        a (Mat): Column-normalized M x N matrix
        y (Vec): Measurements, normally of unit norm
        yhat (Vec): Current approximation of y
        chat (Vec): Current coefficients
        r (Vec): Current residual, equal to y - yhat
        weights (EmpWeights): Objective weights
        floor (float): Minimum correlation magnitude
        selection_ratio (float): Fraction of the best energy drop a candidate must reach

    Returns:
        ScanResult: Selected index, coefficient, score and trial residual
    """
    if weights.w1 < 0 or weights.w2 < 0:
        raise NegativeWeight(f"weights must be non-negative, got {weights}")
    if not 0 < selection_ratio <= 1:
        raise BadParameter(f"selection_ratio must lie in (0, 1], got {selection_ratio}")
    m, n = a.shape
    operands = ((y, m, "y"), (yhat, m, "yhat"), (r, m, "residual"), (chat, n, "chat"))
    for vec, size, what in operands:
        if vec.shape[0] != size:
            raise DimensionMismatch(size, vec.shape[0], what=what)

    corr = a.T @ r
    drops = corr * corr
    r_energy = float(r @ r)
    admissible = (
        (np.abs(corr) > floor)
        & (drops > config.MIN_ENERGY_DROP * r_energy)
        & (drops >= selection_ratio * drops.max())
    )
    candidates = np.flatnonzero(admissible)
    if candidates.size == 0:
        raise NoAdmissibleAtom("no atom reduces the residual")

    c = corr[candidates]
    trial = r[:, None] - a[:, candidates] * c[None, :]
    trial_norms = np.sqrt(np.maximum(r_energy - drops[candidates], 0.0))

    chat_aug = np.repeat(chat[:, None], candidates.size, axis=1)
    chat_aug[candidates, np.arange(candidates.size)] += c

    y_norm = float(np.linalg.norm(y)) or 1.0
    h_residual = column_entropies(trial / y_norm, normalize=False)
    h_coefficients = column_entropies(chat_aug)
    scores = weights.w1 * h_residual + weights.w2 * h_coefficients
    tied = np.flatnonzero(scores <= scores.min() + config.TIE_TOLERANCE)
    best = tied[np.lexsort((candidates[tied], trial_norms[tied]))[0]]

    return ScanResult(
        j0=int(candidates[best]),
        c=float(c[best]),
        h_cond=float(scores[best]),
        residual=trial[:, best].copy(),
        residual_norm=float(trial_norms[best]),
    )


def gamma_default(m: int, n: int, input_snr_db: float) -> float:
    """
    Default entropy-ratio gate (M + N + 5 SNR) / M with SNR in dB.

    Args:
        m (int): Number of measurements
        n (int): Signal dimension
        input_snr_db (float): Input SNR in dB

    Returns:
        float: Positive gate value
    """
    if m < 1:
        raise BadDimension(f"need m >= 1, got {m}")
    gamma = (m + n + 5.0 * input_snr_db) / m
    if gamma <= 0:
        raise NonPositiveGamma(
            f"(M + N + 5 SNR) / M = {gamma:.4g} for M={m}, N={n}, SNR={input_snr_db} dB"
        )
    return gamma


def emp_recover_noiseless(
    a: ArrayLike,
    y: ArrayLike,
    cfg: Optional[EmpConfig] = None,
    *,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    EMP without the entropy gate; runs until ||r|| < epsilon.

    Args:
        a (ArrayLike): Column-normalized M x N matrix
        y (ArrayLike): Measurements
        cfg (Optional[EmpConfig]): Run parameters; gamma must be absent

    Returns:
        RecoveryResult: Residual trace is on the unit-norm measurement
    """
    cfg = cfg or EmpConfig()
    if cfg.noisy:
        raise BadParameter("noiseless EMP takes no gamma")
    return _emp_loop(a, y, cfg, scales=scales, psi=psi)


def emp_recover_noisy(
    a: ArrayLike,
    y: ArrayLike,
    cfg: EmpConfig,
    *,
    scales: Optional[ArrayLike] = None,
    psi: Optional[ArrayLike] = None,
) -> RecoveryResult:
    """
    EMP with adaptive weights and the gamma gate on successive entropies.

    Args:
        a (ArrayLike): Column-normalized M x N matrix
        y (ArrayLike): Measurements
        cfg (EmpConfig): Run parameters; gamma must be set

    Returns:
        RecoveryResult: Residual trace is on the unit-norm measurement
    """
    if not cfg.noisy:
        raise BadParameter("noisy EMP needs gamma")
    return _emp_loop(a, y, cfg, scales=scales, psi=psi)


def _emp_loop(
    a: ArrayLike,
    y: ArrayLike,
    cfg: EmpConfig,
    *,
    scales: Optional[ArrayLike],
    psi: Optional[ArrayLike],
) -> RecoveryResult:
    a, y = prepare_operands(a, y)
    m, n = a.shape
    max_iter = cfg.resolve_max_iter(m)
    y_unit, y_norm = normalize_l2(y)

    chat = np.zeros(n)
    yhat = np.zeros(m)
    r = y_unit.copy()
    residuals = [float(np.linalg.norm(r))]
    entropies: List[float] = []
    indices: List[int] = []
    coefficients: List[float] = []
    weights = EmpWeights.noiseless(n)
    h_prev = rep_entropy(y_unit).value

    while True:
        if residuals[-1] < cfg.epsilon:
            termination = Termination.RESIDUAL_BELOW_EPSILON
            break
        if len(indices) >= max_iter:
            termination = Termination.ITERATION_CAP
            break
        if cfg.noisy:
            nnz = int(np.count_nonzero(chat))
            if nnz >= m:
                termination = Termination.SPARSITY_REACHED
                break
            weights = EmpWeights.noisy(m, nnz)

        try:
            scan = emp_candidate_scan(
                a, y_unit, yhat, chat, r, weights, cfg.correlation_floor, cfg.selection_ratio
            )
        except NoAdmissibleAtom:
            termination = Termination.NO_ADMISSIBLE_ATOM
            break

        if cfg.noisy:
            try:
                ratio = delta_h(scan.h_cond, h_prev)
            except DegenerateHistory as e:
                logger.debug(f"Entropy gate on degenerate history: {e}")
                termination = Termination.ENTROPY_GATE
                break
            if ratio >= cfg.gamma:
                logger.debug(f"Entropy gate: ratio {ratio:.4f} >= gamma {cfg.gamma:.4f}")
                termination = Termination.ENTROPY_GATE
                break
            h_prev = scan.h_cond

        chat[scan.j0] += scan.c
        yhat = yhat + scan.c * a[:, scan.j0]
        r = scan.residual
        residuals.append(scan.residual_norm)
        entropies.append(scan.h_cond)
        indices.append(scan.j0)
        coefficients.append(scan.c)
        logger.debug(
            f"EMP iteration {len(indices)}: atom {scan.j0}, "
            f"c={scan.c:.4e}, H={scan.h_cond:.4f}, |r|={residuals[-1]:.3e}"
        )

    mode = "noisy" if cfg.noisy else "noiseless"
    logger.debug(f"EMP ({mode}) stopped after {len(indices)} iterations: {termination.value}")
    return build_result(
        chat * y_norm,
        iterations=len(indices),
        termination=termination,
        residual_trace=residuals,
        support=sorted(set(indices)),
        entropy_trace=entropies,
        index_trace=indices,
        coefficient_trace=coefficients,
        scales=scales,
        psi=psi,
    )


def normalized_coefficients(
    result: RecoveryResult, y: ArrayLike, scales: Optional[ArrayLike] = None
) -> Vec:
    """
    Coefficients of a result in the working domain of the unit-norm y.

    Inverse of the rescaling applied when a run finishes; used to check a
    stored residual against y/||y|| - A chat.
    """
    _, y_norm = normalize_l2(y)
    chat = result.chat.copy()
    if scales is not None:
        chat = chat * as_vector(scales, "scales")
    return chat / y_norm
