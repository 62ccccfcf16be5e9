"""Benchmark harness: metrics, seeded sweeps and report files."""
