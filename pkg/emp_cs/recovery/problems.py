"""
Synthetic compressed-sensing problems for emp_cs.

Builds representation bases, Gaussian measurement matrices, sparse and
compressible signals, noisy copies at an exact input SNR, and diagnostics
(mutual coherence, empirical restricted isometry constant). Every generator is
a pure function of its dimensions, parameters and seed.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from emp_cs.core.linalg import (
    Mat,
    Vec,
    as_matrix,
    as_vector,
    column_normalize,
)
from emp_cs.recovery.error_handling import (
    BadDimension,
    BadParameter,
    DimensionMismatch,
    ZeroVector,
)

logger = logging.getLogger(__name__)

MIN_SPARSE_MAGNITUDE = 0.1


@dataclass(frozen=True)
class SparseProblem:
    """Basis, measurement matrix, their normalized product and the measurements."""

    psi: Mat
    phi: Mat
    a: Mat
    a_scales: Vec
    y: Vec

    @property
    def m(self) -> int:
        return self.phi.shape[0]

    @property
    def n(self) -> int:
        return self.psi.shape[1]


@dataclass(frozen=True)
class SignalInstance:
    """Ground-truth coefficients, the clean signal and an optional noisy copy."""

    coeffs: Vec
    clean: Vec
    noisy: Optional[Vec] = None
    input_snr_db: Optional[float] = None

    @property
    def observed(self) -> Vec:
        """The signal an algorithm actually gets to measure."""
        return self.clean if self.noisy is None else self.noisy


def derive_seed(*keys: int) -> int:
    """
    Derive a deterministic 32-bit seed from integer keys.

    Args:
        *keys (int): Non-negative integers, e.g. (seed, m, trial)

    Returns:
        int: Seed usable with numpy.random.default_rng
    """
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(1)
    return int(state[0])


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def fourier_basis(n: int) -> Mat:
    """
    Real orthonormal Fourier basis of size n x n.

    Column 0 is the constant (DC) atom, columns 2f-1 and 2f are the cosine
    and sine atoms of frequency f = 1 .. n/2 - 1, and the last column is the
    alternating Nyquist atom.

    Args:
        n (int): Even dimension, at least 2

    Returns:
        Mat: Orthonormal basis with atoms as columns
    """
    if n < 2 or n % 2:
        raise BadDimension(f"Fourier basis needs an even n >= 2, got {n}")

    t = np.arange(n)
    psi = np.empty((n, n))
    psi[:, 0] = 1.0 / math.sqrt(n)
    for f in range(1, n // 2):
        angle = 2.0 * math.pi * f * t / n
        psi[:, 2 * f - 1] = math.sqrt(2.0 / n) * np.cos(angle)
        psi[:, 2 * f] = math.sqrt(2.0 / n) * np.sin(angle)
    psi[:, n - 1] = np.where(t % 2 == 0, 1.0, -1.0) / math.sqrt(n)
    return psi


def random_frame(n: int, seed: int) -> Mat:
    """
    Non-orthogonal n x n frame with unit-norm Gaussian columns.

    Args:
        n (int): Dimension, at least 2
        seed (int): Random seed

    Returns:
        Mat: Column-normalized frame
    """
    if n < 2:
        raise BadDimension(f"frame needs n >= 2, got {n}")
    frame, _ = column_normalize(_rng(seed).standard_normal((n, n)))
    return frame


def gaussian_measurement(m: int, n: int, seed: int) -> Mat:
    """
    Measurement matrix with i.i.d. N(0, 1/m) entries.

    Args:
        m (int): Number of measurements
        n (int): Signal dimension
        seed (int): Random seed

    Returns:
        Mat: m x n measurement matrix
    """
    if not 1 <= m <= n:
        raise BadDimension(f"need 1 <= m <= n, got m={m}, n={n}")
    return _rng(seed).normal(0.0, 1.0 / math.sqrt(m), size=(m, n))


def mutual_coherence(phi: ArrayLike, psi: ArrayLike) -> float:
    """
    sqrt(N) times the largest |<phi_i, psi_j>| over measurement rows and basis columns.

    Rows of phi and columns of psi are normalized before evaluation, so the
    result lies in [1, sqrt(N)].

    Args:
        phi (ArrayLike): M x N measurement matrix
        psi (ArrayLike): N x N representation basis

    Returns:
        float: Mutual coherence
    """
    phi = as_matrix(phi, "phi")
    psi = as_matrix(psi, "psi")
    if phi.shape[1] != psi.shape[0]:
        raise DimensionMismatch(psi.shape[0], phi.shape[1], what="phi columns")

    rows, _ = column_normalize(phi.T)
    cols, _ = column_normalize(psi)
    n = psi.shape[0]
    return math.sqrt(n) * float(np.max(np.abs(rows.T @ cols)))


def rip_estimate(phi: ArrayLike, k: int, trials: int, seed: int) -> float:
    """
    Empirical lower bound on the restricted isometry constant of order k.

    Draws random unit-norm k-sparse vectors and returns the largest observed
    | ||phi x||^2 - 1 |.

    Args:
        phi (ArrayLike): M x N measurement matrix
        k (int): Sparsity order
        trials (int): Number of random vectors
        seed (int): Random seed

    Returns:
        float: Empirical delta
    """
    phi = as_matrix(phi, "phi")
    n = phi.shape[1]
    if not 1 <= k <= n:
        raise BadDimension(f"need 1 <= k <= {n}, got k={k}")
    if trials < 1:
        raise BadDimension(f"need at least one trial, got {trials}")

    rng = _rng(seed)
    delta = 0.0
    for _ in range(trials):
        support = rng.choice(n, size=k, replace=False)
        values = rng.standard_normal(k)
        values /= np.linalg.norm(values)
        energy = float(np.sum((phi[:, support] @ values) ** 2))
        delta = max(delta, abs(energy - 1.0))
    return delta


def gen_sparse_signal(psi: ArrayLike, k: int, seed: int) -> SignalInstance:
    """
    Exactly k-sparse signal in the basis psi.

    Nonzero positions are uniform; values are standard normal, redrawn while
    any magnitude is below MIN_SPARSE_MAGNITUDE.

    Args:
        psi (ArrayLike): N x N representation basis
        k (int): Number of nonzero coefficients
        seed (int): Random seed

    Returns:
        SignalInstance: Coefficients and clean signal
    """
    psi = as_matrix(psi, "psi")
    n = psi.shape[1]
    if not 1 <= k <= n:
        raise BadDimension(f"need 1 <= k <= {n}, got k={k}")

    rng = _rng(seed)
    support = rng.choice(n, size=k, replace=False)
    values = rng.standard_normal(k)
    small = np.abs(values) < MIN_SPARSE_MAGNITUDE
    while np.any(small):
        values[small] = rng.standard_normal(int(np.sum(small)))
        small = np.abs(values) < MIN_SPARSE_MAGNITUDE

    coeffs = np.zeros(n)
    coeffs[support] = values
    return SignalInstance(coeffs=coeffs, clean=psi @ coeffs)


def gen_compressible_signal(psi: ArrayLike, p: float, r: float, seed: int) -> SignalInstance:
    """
    Compressible signal whose sorted magnitudes are exactly p * i^(-r).

    Args:
        psi (ArrayLike): N x N representation basis
        p (float): Largest magnitude
        r (float): Decay exponent, must exceed 1
        seed (int): Random seed

    Returns:
        SignalInstance: Coefficients and clean signal
    """
    if p <= 0:
        raise BadParameter(f"power-law scale must be positive, got p={p}")
    if r <= 1:
        raise BadParameter(f"power-law exponent must exceed 1, got r={r}")

    psi = as_matrix(psi, "psi")
    n = psi.shape[1]
    rng = _rng(seed)
    magnitudes = p * np.arange(1, n + 1, dtype=np.float64) ** (-r)
    signs = rng.choice(np.array([-1.0, 1.0]), size=n)
    positions = rng.permutation(n)

    coeffs = np.empty(n)
    coeffs[positions] = signs * magnitudes
    return SignalInstance(coeffs=coeffs, clean=psi @ coeffs)


def add_awgn(clean: ArrayLike, snr_db: float, seed: int) -> Tuple[Vec, float]:
    """
    Add white Gaussian noise rescaled to hit the target SNR exactly.

    Args:
        clean (ArrayLike): Clean signal with positive energy
        snr_db (float): Target SNR in dB
        seed (int): Random seed

    Returns:
        Tuple[Vec, float]: (noisy signal, achieved SNR in dB)
    """
    clean = as_vector(clean, "clean signal")
    signal_energy = float(np.dot(clean, clean))
    if signal_energy == 0.0:
        raise ZeroVector("clean signal")

    noise = _rng(seed).standard_normal(clean.shape)
    target_energy = signal_energy / 10.0 ** (snr_db / 10.0)
    noise *= math.sqrt(target_energy / float(np.dot(noise, noise)))

    achieved = 10.0 * math.log10(signal_energy / float(np.dot(noise, noise)))
    return clean + noise, achieved


def with_noise(signal: SignalInstance, snr_db: float, seed: int) -> SignalInstance:
    """Copy of a signal instance carrying a noisy version at snr_db."""
    noisy, achieved = add_awgn(signal.clean, snr_db, seed)
    return dataclasses.replace(signal, noisy=noisy, input_snr_db=achieved)


def measure(phi: ArrayLike, s: ArrayLike) -> Vec:
    """
    Measurements y = phi s.

    Args:
        phi (ArrayLike): M x N measurement matrix
        s (ArrayLike): Length-N signal

    Returns:
        Vec: Length-M measurements
    """
    phi = as_matrix(phi, "phi")
    s = as_vector(s, "signal")
    if phi.shape[1] != s.shape[0]:
        raise DimensionMismatch(phi.shape[1], s.shape[0], what="signal length")
    return phi @ s


def build_problem(psi: ArrayLike, phi: ArrayLike, s: ArrayLike) -> SparseProblem:
    """
    Assemble a recovery problem for the signal s.

    Args:
        psi (ArrayLike): N x N representation basis
        phi (ArrayLike): M x N measurement matrix
        s (ArrayLike): Signal that gets measured

    Returns:
        SparseProblem: Problem with column-normalized A = phi psi
    """
    psi = as_matrix(psi, "psi")
    phi = as_matrix(phi, "phi")
    if phi.shape[1] != psi.shape[0]:
        raise DimensionMismatch(psi.shape[0], phi.shape[1], what="phi columns")
    if phi.shape[0] > psi.shape[1]:
        raise BadDimension(f"need M <= N, got M={phi.shape[0]}, N={psi.shape[1]}")

    a, a_scales = column_normalize(phi @ psi)
    return SparseProblem(psi=psi, phi=phi, a=a, a_scales=a_scales, y=measure(phi, s))
