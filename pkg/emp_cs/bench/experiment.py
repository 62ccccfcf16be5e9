"""
Seeded experiment sweeps for emp_cs.

A sweep runs every selected algorithm on `trials` generated instances for
each measurement count in the grid and records one ReportRow per
(algorithm, m, trial). Every instance depends only on (seed, m, trial), so
rows are identical whether trials run serially or in a process pool.
"""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from emp_cs.bench.metrics import reconstruction_ip, recovery_flag, snr_out, srer
from emp_cs.core.config import config
from emp_cs.recovery.baselines import estimate_sparsity
from emp_cs.recovery.emp import gamma_default
from emp_cs.recovery.error_handling import EmpError, log_recovery_failure
from emp_cs.recovery.model import (
    Algorithm,
    Basis,
    EmpConfig,
    Experiment,
    ExperimentConfig,
    ReportRow,
    StopRule,
)
from emp_cs.recovery.pipeline import RecoveryOutcome, RecoveryPipeline
from emp_cs.recovery.problems import (
    SignalInstance,
    SparseProblem,
    build_problem,
    derive_seed,
    fourier_basis,
    gaussian_measurement,
    gen_compressible_signal,
    gen_sparse_signal,
    random_frame,
    with_noise,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialInstance:
    """Generated problem of one (m, trial) cell together with its ground truth."""

    m: int
    trial: int
    problem: SparseProblem
    signal: SignalInstance
    input_snr_db: Optional[float] = None


def trial_seeds(seed: int, m: int, trial: int) -> Tuple[int, int, int, int]:
    """Seeds for (basis, measurement matrix, signal, noise) of one trial."""
    base = derive_seed(seed, m, trial)
    return tuple(derive_seed(base, part) for part in range(4))


def build_trial(
    cfg: ExperimentConfig, m: int, trial: int, input_snr_db: Optional[float] = None
) -> TrialInstance:
    """
    Generate the instance of one (m, trial) cell.

    The clean signal and the noise direction depend only on (seed, m, trial),
    so the levels of an SNR grid see the same instance at different noise
    powers.

    Args:
        cfg (ExperimentConfig): Sweep configuration
        m (int): Number of measurements
        trial (int): Trial index
        input_snr_db (Optional[float]): Noise level, defaults to cfg.input_snr_db

    Returns:
        TrialInstance: Problem and ground truth
    """
    basis_seed, phi_seed, signal_seed, noise_seed = trial_seeds(cfg.seed, m, trial)

    if cfg.basis == Basis.FOURIER:
        psi = fourier_basis(cfg.n)
    else:
        psi = random_frame(cfg.n, basis_seed)
    phi = gaussian_measurement(m, cfg.n, phi_seed)

    if cfg.experiment == Experiment.NOISY_COMPRESSIBLE:
        signal = gen_compressible_signal(psi, cfg.power_law.p, cfg.power_law.r, signal_seed)
    else:
        signal = gen_sparse_signal(psi, cfg.k, signal_seed)
    snr_db = None
    if cfg.experiment.noisy:
        snr_db = cfg.input_snr_db if input_snr_db is None else input_snr_db
        signal = with_noise(signal, snr_db, noise_seed)

    problem = build_problem(psi, phi, signal.observed)
    return TrialInstance(
        m=m, trial=trial, problem=problem, signal=signal, input_snr_db=snr_db
    )


def stop_rule_for(cfg: ExperimentConfig, m: int, y: np.ndarray) -> Tuple[StopRule, int]:
    """
    Baseline halting rule and CoSaMP/ROMP sparsity level for one experiment.

    Args:
        cfg (ExperimentConfig): Sweep configuration
        m (int): Number of measurements
        y (np.ndarray): Measurements of the instance

    Returns:
        Tuple[StopRule, int]: (stop rule, sparsity level k)
    """
    if cfg.experiment == Experiment.NOISELESS_KNOWN_K:
        return StopRule.known_sparsity(cfg.k), cfg.k

    k = estimate_sparsity(m, cfg.n)
    if cfg.experiment == Experiment.NOISY_COMPRESSIBLE:
        return StopRule.residual_threshold(cfg.epsilon * float(np.linalg.norm(y))), k
    return StopRule.known_sparsity(k), k


def emp_config_for(
    cfg: ExperimentConfig, m: int, input_snr_db: Optional[float] = None
) -> EmpConfig:
    """EMP parameters: noiseless mode, or noisy mode with the override or default gamma."""
    if not cfg.experiment.noisy:
        return EmpConfig(epsilon=cfg.epsilon)
    gamma = cfg.gamma_override
    if gamma is None:
        snr_db = cfg.input_snr_db if input_snr_db is None else input_snr_db
        gamma = gamma_default(m, cfg.n, snr_db)
    return EmpConfig(epsilon=cfg.epsilon, gamma=gamma)


def score_outcome(
    cfg: ExperimentConfig, instance: TrialInstance, outcome: RecoveryOutcome
) -> ReportRow:
    """
    Turn one recovery outcome into a report row.

    A failed run scores as the zero reconstruction.
    """
    n = cfg.n
    shat = outcome.shat(n)
    signal = instance.signal

    snr_db = snr_out(signal.clean, shat) if cfg.experiment.noisy else None
    recovered = None
    if cfg.experiment == Experiment.NOISELESS_KNOWN_K:
        recovered = recovery_flag(signal.coeffs, outcome.chat(n))
    ip = reconstruction_ip(shat) if np.linalg.norm(shat) > config.ZERO_NORM else None

    return ReportRow(
        algorithm=outcome.algorithm.value,
        m=instance.m,
        trial=instance.trial,
        srer_db=srer(signal.observed, shat),
        snr_db=snr_db,
        ip=ip,
        recovered=recovered,
        iterations=outcome.iterations,
        termination=outcome.termination,
        input_snr_db=instance.input_snr_db if cfg.snr_grid else None,
    )


def run_trial(
    cfg: ExperimentConfig, m: int, trial: int, input_snr_db: Optional[float] = None
) -> List[ReportRow]:
    """
    Run every selected algorithm on one generated instance.

    Args:
        cfg (ExperimentConfig): Sweep configuration
        m (int): Number of measurements
        trial (int): Trial index
        input_snr_db (Optional[float]): Noise level, defaults to cfg.input_snr_db

    Returns:
        List[ReportRow]: One row per algorithm, in cfg.algorithms order
    """
    instance = build_trial(cfg, m, trial, input_snr_db)
    stop, k = stop_rule_for(cfg, m, instance.problem.y)

    emp_error: Optional[EmpError] = None
    try:
        emp_config = emp_config_for(cfg, m, input_snr_db)
    except EmpError as e:
        emp_config, emp_error = None, e
    pipeline = RecoveryPipeline(stop, emp_config=emp_config, k=k)

    rows = []
    for algorithm in cfg.algorithms:
        algorithm = Algorithm(algorithm)
        if algorithm == Algorithm.EMP and emp_error is not None:
            outcome = RecoveryOutcome(algorithm=algorithm, error=emp_error)
        else:
            outcome = pipeline.process(algorithm, instance.problem)
        if outcome.error is not None:
            log_recovery_failure(algorithm.value, m, trial, outcome.error)
        rows.append(score_outcome(cfg, instance, outcome))
    return rows


def _row_key(cfg: ExperimentConfig):
    snr_position = {snr: i for i, snr in enumerate(cfg.snr_levels)}
    m_position = {m: i for i, m in enumerate(cfg.m_grid)}
    algorithm_position = {Algorithm(a).value: i for i, a in enumerate(cfg.algorithms)}
    return lambda row: (
        snr_position.get(row.input_snr_db, 0),
        m_position[row.m],
        row.trial,
        algorithm_position[row.algorithm],
    )


def run_experiment(
    cfg: ExperimentConfig, workers: int = 1, progress: bool = False
) -> List[ReportRow]:
    """
    Run a full sweep.

    Args:
        cfg (ExperimentConfig): Sweep configuration
        workers (int): Worker processes; 1 runs in-process
        progress (bool): Show a tqdm bar on stderr

    Returns:
        List[ReportRow]: |snr_levels| * |m_grid| * trials * |algorithms| rows
            ordered by (SNR level, m as listed in the grid, trial, algorithm as listed)
    """
    tasks = [
        (snr, m, t) for snr in cfg.snr_levels for m in cfg.m_grid for t in range(cfg.trials)
    ]
    logger.info(
        f"Running {cfg.experiment.value}: n={cfg.n}, m_grid={list(cfg.m_grid)}, "
        f"trials={cfg.trials}, snr_levels={list(cfg.snr_levels)}, "
        f"algorithms={[Algorithm(a).value for a in cfg.algorithms]}"
    )

    rows: List[ReportRow] = []
    with tqdm(
        total=len(tasks), desc=cfg.experiment.value, file=sys.stderr, disable=not progress
    ) as bar:
        if workers <= 1:
            for snr, m, t in tasks:
                rows.extend(run_trial(cfg, m, t, snr))
                bar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(run_trial, cfg, m, t, snr) for snr, m, t in tasks]
                for future in as_completed(futures):
                    rows.extend(future.result())
                    bar.update(1)

    rows.sort(key=_row_key(cfg))
    logger.info(f"Sweep finished with {len(rows)} rows")
    return rows
