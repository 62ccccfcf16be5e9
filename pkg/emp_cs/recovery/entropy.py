"""
Representation entropy for emp_cs.

Squared entries of a unit-l2 vector are read as a probability distribution
over basis functions; the Shannon entropy of that distribution measures how
many atoms the representation effectively uses. Information power maps an
entropy to the variance of the Gaussian source with the same entropy.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import xlogy

from emp_cs.core.config import config
from emp_cs.core.linalg import Vec, as_matrix, as_vector
from emp_cs.recovery.error_handling import (
    BadParameter,
    DegenerateHistory,
    NegativeWeight,
    ZeroVector,
)

TWO_PI_E = 2.0 * math.pi * math.e


@dataclass(frozen=True)
class EntropyValue:
    """An entropy together with the logarithm base it is expressed in."""

    value: float
    base: float = math.e

    def to_nats(self) -> float:
        return self.value * math.log(self.base)

    def to_bits(self) -> float:
        return self.value * math.log2(self.base)


def _check_base(base: float):
    if not base > 1:
        raise BadParameter(f"logarithm base must exceed 1, got {base}")


def rep_entropy(x: ArrayLike, base: float = math.e) -> EntropyValue:
    """
    Entropy of representation sum_i x_i^2 log(1/x_i^2) of the normalized vector.

    Args:
        x (ArrayLike): Non-zero vector; normalized internally
        base (float): Logarithm base

    Returns:
        EntropyValue: Entropy in [0, log_base(dim)]
    """
    _check_base(base)
    x = as_vector(x)
    energy = float(np.dot(x, x))
    if energy == 0.0:
        raise ZeroVector("entropy input")

    p = x * x / energy
    h = -float(np.sum(xlogy(p, p))) / math.log(base)
    upper = math.log(x.size) / math.log(base)
    return EntropyValue(value=min(max(h, 0.0), upper), base=base)


def column_entropies(mat: ArrayLike, base: float = math.e, normalize: bool = True) -> Vec:
    """
    Representation entropy of every column of a matrix.

    With `normalize` off the squared entries are used as they are, so a column
    of norm at most 1 scores sum_i x_i^2 log(1/x_i^2), which vanishes with its
    energy. Columns whose norm is at most ZERO_NORM get entropy 0.

    Args:
        mat (ArrayLike): M x N matrix
        base (float): Logarithm base
        normalize (bool): Scale every column to unit norm first

    Returns:
        Vec: Length-N entropies
    """
    _check_base(base)
    mat = as_matrix(mat)
    energy = np.einsum("ij,ij->j", mat, mat)
    live = energy > config.ZERO_NORM**2
    p = mat[:, live] ** 2
    if normalize:
        p = p / energy[live]
    elif np.any(energy > 1.0 + 1e-9):
        raise BadParameter("unnormalized entropy needs columns of norm at most 1")

    h = np.zeros(mat.shape[1])
    h[live] = -np.sum(xlogy(p, p), axis=0) / math.log(base)
    h = np.maximum(h, 0.0)
    if normalize:
        h = np.minimum(h, math.log(mat.shape[0]) / math.log(base))
    return h


def residual_entropy(e: ArrayLike, base: float = math.e) -> float:
    """
    Entropy sum_i e_i^2 log(1/e_i^2) of a residual of the unit-norm measurement.

    Unlike rep_entropy the residual is not renormalized: a shorter residual
    carries less entropy, and the zero residual carries none.

    Args:
        e (ArrayLike): Residual with ||e|| <= 1
        base (float): Logarithm base

    Returns:
        float: Residual entropy
    """
    e = as_vector(e, "residual")
    return float(column_entropies(e[:, None], base, normalize=False)[0])


def weighted_conditional_entropy(
    e: ArrayLike, chat_aug: ArrayLike, w1: float, w2: float, base: float = math.e
) -> float:
    """
    Weighted objective w1 H(e) + w2 H(chat_aug) scored for every EMP candidate.

    H(e) is the residual_entropy of e, which lives in the unit-norm
    measurement domain; H(chat_aug) is the entropy of the normalized
    coefficients.

    Args:
        e (ArrayLike): Candidate residual, ||e|| <= 1
        chat_aug (ArrayLike): Candidate coefficients including the trial coefficient
        w1 (float): Residual weight
        w2 (float): Coefficient weight
        base (float): Logarithm base

    Returns:
        float: Weighted conditional entropy
    """
    if w1 < 0 or w2 < 0:
        raise NegativeWeight(f"weights must be non-negative, got w1={w1}, w2={w2}")

    e = as_vector(e, "residual")
    chat_aug = as_vector(chat_aug, "coefficients")
    h_e = residual_entropy(e, base)
    h_c = 0.0
    if np.linalg.norm(chat_aug) > config.ZERO_NORM:
        h_c = rep_entropy(chat_aug, base).value
    return w1 * h_e + w2 * h_c


def information_power(h: EntropyValue) -> float:
    """
    Variance of the Gaussian source whose entropy equals h.

    Args:
        h (EntropyValue): Entropy and its base

    Returns:
        float: sigma^2 = 2^(2 H log2 b) / (2 pi e)
    """
    return 2.0 ** (2.0 * h.to_bits()) / TWO_PI_E


def gaussian_entropy(variance: float, base: float = math.e) -> EntropyValue:
    """Entropy log_b sqrt(2 pi e sigma^2) of a Gaussian source."""
    _check_base(base)
    if variance <= 0:
        raise BadParameter(f"variance must be positive, got {variance}")
    return EntropyValue(value=0.5 * math.log(TWO_PI_E * variance) / math.log(base), base=base)


def theoretical_dimension(x: ArrayLike) -> float:
    """Effective number of active components, exp(H) with H in nats."""
    return math.exp(rep_entropy(x).value)


def delta_h(h_curr: float, h_prev: float) -> float:
    """
    Ratio of successive conditional entropies.

    Args:
        h_curr (float): Conditional entropy after the candidate update
        h_prev (float): Conditional entropy before it

    Returns:
        float: h_curr / h_prev
    """
    if h_prev <= config.ZERO_NORM:
        raise DegenerateHistory(
            f"previous conditional entropy {h_prev:.3e} is numerically zero"
        )
    return h_curr / h_prev
