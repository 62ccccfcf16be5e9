import logging

import numpy as np
import pytest

from emp_cs.bench.experiment import (
    build_trial,
    emp_config_for,
    run_experiment,
    stop_rule_for,
    trial_seeds,
)
from emp_cs.recovery.error_handling import NonPositiveGamma
from emp_cs.recovery.model import ExperimentConfig, StopMode

ORDER = ["MP", "OMP", "CoSaMP", "ROMP", "EMP"]


def _known_k(**overrides):
    values = dict(experiment="NoiselessKnownK", n=16, k=2, m_grid=(8, 12), trials=2, seed=7)
    values.update(overrides)
    return ExperimentConfig(**values)


def _noisy_sparse(**overrides):
    values = dict(
        experiment="NoisySparse",
        n=16,
        k=2,
        basis="RandomFrame",
        m_grid=(10,),
        input_snr_db=3.0,
        trials=2,
        seed=1,
    )
    values.update(overrides)
    return ExperimentConfig(**values)


def test_trial_seeds_depend_only_on_keys():
    assert trial_seeds(1, 20, 3) == trial_seeds(1, 20, 3)
    assert trial_seeds(1, 20, 3) != trial_seeds(1, 20, 4)
    assert len(set(trial_seeds(1, 20, 3))) == 4


def test_build_trial_generates_consistent_instance():
    cfg = _noisy_sparse()
    instance = build_trial(cfg, 10, 0)
    assert instance.problem.a.shape == (10, 16)
    assert np.count_nonzero(instance.signal.coeffs) == 2
    assert instance.signal.input_snr_db == pytest.approx(3.0)
    np.testing.assert_allclose(instance.problem.y, instance.problem.phi @ instance.signal.noisy)
    np.testing.assert_array_equal(instance.problem.y, build_trial(cfg, 10, 0).problem.y)


def test_stop_rules_per_experiment():
    y = np.ones(4)
    rule, k = stop_rule_for(_known_k(), 8, y)
    assert (rule.mode, rule.k, k) == (StopMode.KNOWN_SPARSITY, 2, 2)

    rule, k = stop_rule_for(_known_k(experiment="NoiselessUnknownK"), 8, y)
    assert rule.k == k == 1

    compressible = ExperimentConfig(
        experiment="NoisyCompressible",
        n=40,
        m_grid=(36,),
        input_snr_db=0.0,
        power_law={"p": 1.0, "r": 1.5},
        epsilon=0.1,
    )
    rule, k = stop_rule_for(compressible, 36, y)
    assert rule.mode == StopMode.RESIDUAL_THRESHOLD
    assert rule.epsilon == pytest.approx(0.2)
    assert k == 5


def test_emp_config_modes():
    assert not emp_config_for(_known_k(), 8).noisy
    assert emp_config_for(_noisy_sparse(), 10).gamma == pytest.approx((10 + 16 + 15) / 10)
    assert emp_config_for(_noisy_sparse(gamma_override=1.5), 10).gamma == 1.5


def test_run_experiment_rows_are_complete_and_ordered():
    cfg = _known_k()
    rows = run_experiment(cfg)
    assert len(rows) == 2 * 2 * 5
    keys = [(row.m, row.trial, row.algorithm) for row in rows]
    assert keys == [(m, t, a) for m in (8, 12) for t in range(2) for a in ORDER]
    for row in rows:
        assert row.recovered is not None
        assert row.snr_db is None


def test_noisy_rows_carry_snr_only():
    rows = run_experiment(_noisy_sparse(algorithms="omp,emp"))
    assert [row.algorithm for row in rows] == ["OMP", "EMP", "OMP", "EMP"]
    for row in rows:
        assert row.snr_db is not None
        assert row.recovered is None


def test_run_experiment_is_deterministic():
    cfg = _noisy_sparse()
    assert run_experiment(cfg) == run_experiment(cfg)


def test_parallel_sweep_matches_serial():
    cfg = _known_k(trials=3)
    assert run_experiment(cfg, workers=2) == run_experiment(cfg, workers=1)


def test_non_positive_gamma_is_recorded_per_row():
    cfg = _noisy_sparse(input_snr_db=-20.0, m_grid=(4,), algorithms=("OMP", "EMP"))
    rows = run_experiment(cfg)
    emp_rows = [row for row in rows if row.algorithm == "EMP"]
    assert len(rows) == 4
    for row in emp_rows:
        assert row.termination == "NonPositiveGamma"
        assert row.iterations == 0
        assert row.srer_db == pytest.approx(0.0, abs=1e-12)
        assert row.snr_db == pytest.approx(0.0, abs=1e-12)
        assert row.ip is None



def test_snr_grid_levels_share_the_clean_instance():
    cfg = _noisy_sparse(input_snr_db=None, snr_grid=(-6.0, 3.0))
    low, high = build_trial(cfg, 10, 0, -6.0), build_trial(cfg, 10, 0, 3.0)
    np.testing.assert_array_equal(low.signal.clean, high.signal.clean)
    assert low.input_snr_db == -6.0
    noise_low = np.linalg.norm(low.signal.observed - low.signal.clean)
    noise_high = np.linalg.norm(high.signal.observed - high.signal.clean)
    assert noise_low > noise_high
    assert emp_config_for(cfg, 10, 3.0).gamma == pytest.approx((10 + 16 + 15) / 10)
    with pytest.raises(NonPositiveGamma):
        emp_config_for(cfg, 10, -6.0)


def test_snr_grid_sweep_rows_are_ordered_by_level():
    cfg = _noisy_sparse(input_snr_db=None, snr_grid="0,-3", algorithms="OMP,EMP")
    rows = run_experiment(cfg)
    assert len(rows) == 2 * 2 * 2
    keys = [(row.input_snr_db, row.trial, row.algorithm) for row in rows]
    assert keys == [(s, t, a) for s in (0.0, -3.0) for t in range(2) for a in ("OMP", "EMP")]
    assert all(row.input_snr_db is None for row in run_experiment(_noisy_sparse()))


def test_failed_runs_are_logged_as_warnings(caplog):
    cfg = _noisy_sparse(input_snr_db=-20.0, m_grid=(4,), algorithms=("EMP",), trials=1)
    with caplog.at_level(logging.WARNING, logger="emp_cs"):
        run_experiment(cfg)
    records = [r for r in caplog.records if "recorded as failed" in r.getMessage()]
    assert len(records) == 1
    assert "NonPositiveGamma" in records[0].getMessage()
