"""
Reconstruction metrics for emp_cs sweeps.
"""

import math

import numpy as np
from numpy.typing import ArrayLike

from emp_cs.core.config import config
from emp_cs.core.linalg import as_vector
from emp_cs.recovery.entropy import information_power, rep_entropy
from emp_cs.recovery.error_handling import DimensionMismatch, ZeroVector

CAP_ENERGY_RATIO = 1e-30


def _ratio_db(reference: ArrayLike, estimate: ArrayLike, what: str) -> float:
    reference = as_vector(reference, what)
    estimate = as_vector(estimate, "reconstruction")
    if reference.shape != estimate.shape:
        raise DimensionMismatch(reference.shape[0], estimate.shape[0], what="reconstruction")

    signal_energy = float(np.dot(reference, reference))
    if signal_energy == 0.0:
        raise ZeroVector(what)
    error = reference - estimate
    error_energy = float(np.dot(error, error))
    if error_energy < CAP_ENERGY_RATIO * signal_energy:
        return config.SRER_CAP_DB
    return min(10.0 * math.log10(signal_energy / error_energy), config.SRER_CAP_DB)


def srer(s: ArrayLike, shat: ArrayLike) -> float:
    """
    Signal-to-reconstruction-error ratio in dB, capped at SRER_CAP_DB.

    Args:
        s (ArrayLike): Signal the algorithm was given
        shat (ArrayLike): Reconstruction

    Returns:
        float: 10 log10(||s||^2 / ||s - shat||^2)
    """
    return _ratio_db(s, shat, "signal")


def snr_out(s_clean: ArrayLike, shat_from_noisy: ArrayLike) -> float:
    """Output SNR in dB of a reconstruction against the signal before noise."""
    return _ratio_db(s_clean, shat_from_noisy, "clean signal")


def recovery_flag(c_true: ArrayLike, chat: ArrayLike) -> bool:
    """
    Exact-recovery test: relative coefficient error at most RECOVERY_TOLERANCE.

    Args:
        c_true (ArrayLike): True coefficients
        chat (ArrayLike): Recovered coefficients

    Returns:
        bool: True when ||c_true - chat|| <= tol ||c_true||
    """
    c_true = as_vector(c_true, "true coefficients")
    chat = as_vector(chat, "coefficients")
    if c_true.shape != chat.shape:
        raise DimensionMismatch(c_true.shape[0], chat.shape[0], what="coefficients")
    reference = float(np.linalg.norm(c_true))
    if reference == 0.0:
        raise ZeroVector("true coefficients")
    return bool(np.linalg.norm(c_true - chat) <= config.RECOVERY_TOLERANCE * reference)


def reconstruction_ip(shat: ArrayLike) -> float:
    """Information power of the normalized reconstruction, entropy in base 2."""
    return information_power(rep_entropy(shat, base=config.IP_BASE))
