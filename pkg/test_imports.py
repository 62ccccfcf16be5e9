#!/usr/bin/env python3
"""
Test script to verify all imports work correctly.
Run this before starting a sweep to catch import issues early.
"""

import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))


def test_imports():
    """Test all critical imports."""
    print("Testing imports...")

    print("✓ Testing core.config...")
    from emp_cs.core.config import AppConfig, config, configure_logging

    print("✓ Testing core.linalg...")
    from emp_cs.core.linalg import column_normalize, least_squares, normalize_l2

    print("✓ Testing recovery.entropy...")
    from emp_cs.recovery.entropy import information_power, rep_entropy

    print("✓ Testing recovery.problems...")
    from emp_cs.recovery.problems import build_problem, fourier_basis, gaussian_measurement

    print("✓ Testing recovery.baselines...")
    from emp_cs.recovery.baselines import cosamp_recover, mp_recover, omp_recover, romp_recover

    print("✓ Testing recovery.emp...")
    from emp_cs.recovery.emp import emp_recover_noiseless, emp_recover_noisy, gamma_default

    print("✓ Testing recovery.pipeline...")
    from emp_cs.recovery.pipeline import RecoveryPipeline

    print("✓ Testing bench...")
    from emp_cs.bench.experiment import run_experiment
    from emp_cs.bench.metrics import reconstruction_ip, snr_out, srer
    from emp_cs.bench.report import emit_report, summarize

    print("✓ Testing utils...")
    from emp_cs.utils.formatters import ConsoleFormatter, ReportFormatter
    from emp_cs.utils.validators import InputValidator

    print("✓ Testing main...")
    from emp_cs.main import main

    assert isinstance(config, AppConfig)
    print("\n🎉 All imports successful!")


def test_config():
    """Test configuration values."""
    from emp_cs.core.config import config

    print("Testing configuration...")
    invalid = config.get_missing_config()
    print(f"✓ App Name: {config.APP_NAME}")
    print(f"✓ Version: {config.APP_VERSION}")
    print(f"✓ Log level: {config.LOG_LEVEL}")
    print(f"✓ Workers: {config.DEFAULT_WORKERS}")
    assert invalid == [], f"Invalid settings: {invalid}"


if __name__ == "__main__":
    print("🔍 emp-cs - Import Test\n")

    try:
        test_imports()
        print()
        test_config()
    except Exception as e:
        print(f"\n❌ {type(e).__name__}: {e}")
        sys.exit(1)

    print("\n✅ All tests passed! You can now run:")
    print("   emp-bench run --config sweep.env --out report.csv")
