"""Shared fixtures for the emp_cs test suite."""

import numpy as np
import pytest

from emp_cs.core.linalg import column_normalize
from emp_cs.recovery.problems import fourier_basis


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def gaussian_dictionary(rng):
    """Column-normalized 20 x 40 Gaussian matrix."""
    a, _ = column_normalize(rng.standard_normal((20, 40)))
    return a


@pytest.fixture
def sparse_coefficients():
    """Build a k-sparse vector of length n with well-separated magnitudes."""

    def _make(n: int, k: int, seed: int = 0) -> np.ndarray:
        local = np.random.default_rng(seed)
        c = np.zeros(n)
        support = local.choice(n, size=k, replace=False)
        c[support] = local.choice([-1.0, 1.0], size=k) * local.uniform(0.5, 2.0, size=k)
        return c

    return _make


@pytest.fixture
def fourier8():
    return fourier_basis(8)
