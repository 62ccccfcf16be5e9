"""
Long seeded sweeps checking empirical recovery trends.

Part of the default run; deselect with `pytest -m "not benchmark"` for quick iterations.
"""

import numpy as np
import pytest

from emp_cs.bench.experiment import run_experiment
from emp_cs.bench.metrics import srer
from emp_cs.bench.report import summarize
from emp_cs.core.linalg import column_normalize, normalize_l2
from emp_cs.recovery.baselines import omp_recover
from emp_cs.recovery.emp import emp_recover_noiseless, emp_recover_noisy, gamma_default
from emp_cs.recovery.model import EmpConfig, ExperimentConfig, StopRule
from emp_cs.recovery.problems import add_awgn, build_problem, fourier_basis, gen_sparse_signal

pytestmark = pytest.mark.benchmark

NOISY_GRID = (20, 24, 28, 32, 36)


def _means(rows, field):
    return {(s.algorithm, s.m): getattr(s, field) for s in summarize(rows)}


def test_noiseless_parity_at_m60():
    cfg = ExperimentConfig(
        experiment="NoiselessKnownK",
        n=200,
        k=4,
        m_grid=(60,),
        trials=100,
        seed=2024,
        algorithms=("OMP", "CoSaMP", "ROMP", "EMP"),
    )
    rates = _means(run_experiment(cfg), "recovery_rate")
    for name in ("OMP", "CoSaMP", "ROMP", "EMP"):
        assert rates[(name, 60)] >= 0.9
    assert abs(rates[("EMP", 60)] - rates[("OMP", 60)]) <= 0.1


def test_full_measurement_srer():
    psi = fourier_basis(40)
    for seed in range(10):
        signal = gen_sparse_signal(psi, 4, seed)
        problem = build_problem(psi, np.eye(40), signal.clean)
        kwargs = {"scales": problem.a_scales, "psi": psi}
        omp = omp_recover(problem.a, problem.y, StopRule.known_sparsity(4), **kwargs)
        emp = emp_recover_noiseless(problem.a, problem.y, EmpConfig(), **kwargs)
        assert srer(signal.clean, omp.shat) >= 250
        assert srer(signal.clean, emp.shat) >= 250


def test_residual_monotonicity_and_energy_accounting():
    rng = np.random.default_rng(77)
    for i in range(200):
        a, _ = column_normalize(rng.standard_normal((20, 40)))
        c = np.zeros(40)
        c[rng.choice(40, 4, replace=False)] = rng.standard_normal(4)
        y = a @ c
        if i % 2:
            y, _ = add_awgn(y, 3.0, seed=i)
            result = emp_recover_noisy(a, y, EmpConfig(gamma=gamma_default(20, 40, 3.0)))
        else:
            result = emp_recover_noiseless(a, y, EmpConfig(max_iter=100))
        trace = np.array(result.residual_trace)
        assert np.all(np.diff(trace) < 0)
        energy = np.sum(np.square(result.coefficient_trace)) + trace[-1] ** 2
        assert energy == pytest.approx(1.0, abs=1e-8)
        y_unit, _ = normalize_l2(y)
        assert np.linalg.norm(y_unit - a @ (result.chat / np.linalg.norm(y))) == pytest.approx(
            trace[-1], abs=1e-8
        )


@pytest.mark.parametrize("experiment", ["NoisySparse", "NoisyCompressible"])
def test_noisy_snr_trend(experiment):
    cfg = ExperimentConfig(
        experiment=experiment,
        n=40,
        k=4 if experiment == "NoisySparse" else None,
        basis="RandomFrame",
        m_grid=NOISY_GRID,
        input_snr_db=3.0,
        trials=50,
        seed=11,
        epsilon=0.5,
        power_law={"p": 1.0, "r": 1.5} if experiment == "NoisyCompressible" else None,
        algorithms=("OMP", "CoSaMP", "ROMP", "EMP"),
    )
    snr = _means(run_experiment(cfg), "mean_snr_db")
    for m in NOISY_GRID:
        assert snr[("EMP", m)] >= snr[("OMP", m)] - 0.3
        assert snr[("EMP", m)] > snr[("CoSaMP", m)]
        assert snr[("EMP", m)] > snr[("ROMP", m)]
    for m in (20, 24):
        assert snr[("EMP", m)] > snr[("OMP", m)]


def test_information_power_ordering():
    cfg = ExperimentConfig(
        experiment="NoisyCompressible",
        n=40,
        basis="RandomFrame",
        m_grid=(36,),
        input_snr_db=0.0,
        trials=50,
        seed=5,
        epsilon=0.5,
        power_law={"p": 1.0, "r": 1.5},
        algorithms=("OMP", "CoSaMP", "ROMP", "EMP"),
    )
    rows = run_experiment(cfg)
    ip = _means(rows, "mean_ip")
    snr = _means(rows, "mean_snr_db")
    assert ip[("EMP", 36)] < ip[("OMP", 36)] < min(ip[("CoSaMP", 36)], ip[("ROMP", 36)])
    assert snr[("EMP", 36)] > snr[("OMP", 36)] > max(snr[("CoSaMP", 36)], snr[("ROMP", 36)])


def test_gate_behavior_on_fixed_instances():
    rng = np.random.default_rng(8)
    for i in range(50):
        a, _ = column_normalize(rng.standard_normal((28, 40)))
        c = np.zeros(40)
        c[rng.choice(40, 4, replace=False)] = rng.standard_normal(4)
        clean = a @ c
        noisy, _ = add_awgn(clean, 3.0, seed=i)

        gamma = gamma_default(28, 40, 3.0)
        counts = [
            emp_recover_noisy(a, noisy, EmpConfig(gamma=g)).iterations
            for g in (0.25 * gamma, 0.5 * gamma, gamma)
        ]
        assert counts == sorted(counts)

        noiseless = emp_recover_noiseless(a, clean, EmpConfig(max_iter=400))
        if noiseless.residual_trace[-1] < 1e-6:
            gated = emp_recover_noisy(a, clean, EmpConfig(gamma=1e6, max_iter=400))
            assert gated.residual_trace[-1] < 1e-6
