import numpy as np
import pytest

from emp_cs.core.linalg import (
    as_matrix,
    as_vector,
    column_normalize,
    inner,
    least_squares,
    normalize_l2,
)
from emp_cs.recovery.error_handling import (
    DimensionMismatch,
    NonFiniteEntry,
    RankDeficient,
    ZeroColumn,
    ZeroVector,
)


def test_as_vector_rejects_nan_and_wrong_rank():
    with pytest.raises(NonFiniteEntry):
        as_vector([1.0, np.nan])
    with pytest.raises(DimensionMismatch):
        as_vector([[1.0, 2.0]])
    with pytest.raises(NonFiniteEntry):
        as_matrix([[1.0, np.inf]])
    with pytest.raises(DimensionMismatch):
        as_matrix([1.0, 2.0])


def test_inner_product_and_mismatch():
    assert inner([1, 2, 3], [4, 5, 6]) == 32.0
    with pytest.raises(DimensionMismatch):
        inner([1, 2], [1, 2, 3])


def test_normalize_l2_returns_unit_vector_and_norm():
    unit, norm = normalize_l2([3.0, 4.0])
    assert norm == 5.0
    np.testing.assert_allclose(unit, [0.6, 0.8])


def test_normalize_l2_zero_vector():
    with pytest.raises(ZeroVector):
        normalize_l2([0.0, 0.0])


def test_column_normalize(rng):
    a = rng.standard_normal((5, 7))
    normalized, scales = column_normalize(a)
    np.testing.assert_allclose(np.linalg.norm(normalized, axis=0), 1.0)
    np.testing.assert_allclose(normalized * scales, a)


def test_column_normalize_reports_zero_column():
    a = np.array([[1.0, 0.0, 2.0], [1.0, 0.0, 0.0]])
    with pytest.raises(ZeroColumn) as info:
        column_normalize(a)
    assert info.value.column == 1


def test_least_squares_exact_solution(rng):
    a = rng.standard_normal((10, 4))
    x = np.array([1.0, -2.0, 0.5, 3.0])
    np.testing.assert_allclose(least_squares(a, a @ x), x, atol=1e-10)


def test_least_squares_matches_normal_equations(rng):
    a = rng.standard_normal((12, 3))
    y = rng.standard_normal(12)
    expected = np.linalg.solve(a.T @ a, a.T @ y)
    np.testing.assert_allclose(least_squares(a, y), expected, atol=1e-10)


def test_least_squares_rank_deficient():
    a = np.array([[1.0, 1.0], [0.0, 0.0], [2.0, 2.0]])
    with pytest.raises(RankDeficient) as info:
        least_squares(a, [1.0, 0.0, 2.0])
    assert info.value.rank == 1
    assert info.value.cols == 2


def test_least_squares_more_columns_than_rows(rng):
    with pytest.raises(RankDeficient):
        least_squares(rng.standard_normal((2, 3)), [1.0, 2.0])


def test_least_squares_empty_and_mismatch():
    assert least_squares(np.zeros((3, 0)), [1.0, 2.0, 3.0]).size == 0
    with pytest.raises(DimensionMismatch):
        least_squares(np.eye(3), [1.0, 2.0])
