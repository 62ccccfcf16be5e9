"""
Main entry point for the emp-bench command line.

`run` executes a seeded recovery sweep and writes a CSV or JSON report;
`diagnose` prints mutual coherence and an empirical restricted isometry
constant for a generated (measurement, basis) pair.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from rich.console import Console

from emp_cs.bench.experiment import run_experiment
from emp_cs.bench.report import (
    build_experiment_config,
    emit_report,
    load_config_file,
    merge_overrides,
    report_metadata,
    summarize,
)
from emp_cs.core.config import config, configure_logging
from emp_cs.recovery.error_handling import (
    ConfigError,
    EmpError,
    ReportIOError,
    format_error_for_user,
)
from emp_cs.recovery.model import Basis, ReportFormat
from emp_cs.recovery.problems import (
    derive_seed,
    fourier_basis,
    gaussian_measurement,
    mutual_coherence,
    random_frame,
    rip_estimate,
)
from emp_cs.utils.formatters import ConsoleFormatter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

console = Console()
err_console = Console(stderr=True)


class BenchArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors raise ConfigError instead of exiting with 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the `run` and `diagnose` subcommands."""
    parser = BenchArgumentParser(prog="emp-bench", description=config.APP_DESCRIPTION)
    parser.add_argument(
        "--log-level", default=None, help="Logging level (default from EMP_LOG_LEVEL)"
    )
    parser.add_argument("--log-file", default=None, help="Also write log records to this file")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {config.APP_VERSION}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run a recovery sweep and write a report")
    run.add_argument("--config", dest="config_file", help="Flat key = value experiment file")
    run.add_argument(
        "--experiment",
        help="NoiselessKnownK, NoiselessUnknownK, NoisySparse or NoisyCompressible",
    )
    run.add_argument("--n", type=int)
    run.add_argument("--k", type=int)
    run.add_argument("--basis", help="Fourier or RandomFrame")
    run.add_argument("--m-grid", dest="m_grid", help="Comma-separated measurement counts")
    run.add_argument("--snr-db", dest="input_snr_db", type=float)
    run.add_argument(
        "--snr-grid", dest="snr_grid", help="Comma-separated input SNRs (dB) to sweep"
    )
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--epsilon", type=float)
    run.add_argument("--gamma", dest="gamma_override", type=float)
    run.add_argument("--algorithms", help="Comma-separated subset of MP,OMP,CoSaMP,ROMP,EMP")
    run.add_argument("--p", type=float, help="Power-law scale for NoisyCompressible")
    run.add_argument("--r", type=float, help="Power-law exponent for NoisyCompressible")
    run.add_argument("--format", choices=[f.value for f in ReportFormat])
    run.add_argument("--out", help="Report path (default <experiment>.<format>)")
    run.add_argument("--workers", type=int, help="Worker processes for trials")
    run.add_argument("--summary", action="store_true", help="Print per-(algorithm, M) means")
    run.add_argument("--progress", action="store_true", help="Show a progress bar on stderr")

    diagnose = subparsers.add_parser("diagnose", help="Coherence and RIP diagnostics")
    diagnose.add_argument("--coherence", action="store_true")
    diagnose.add_argument("--rip", action="store_true")
    diagnose.add_argument("--n", type=int, default=40)
    diagnose.add_argument("--m", type=int, default=20)
    diagnose.add_argument("--k", type=int, default=4)
    diagnose.add_argument("--trials", type=int, default=1000)
    diagnose.add_argument("--seed", type=int, default=0)
    diagnose.add_argument(
        "--basis", default=Basis.FOURIER.value, choices=[b.value for b in Basis]
    )
    return parser


RUN_FLAGS = (
    "experiment",
    "n",
    "k",
    "basis",
    "m_grid",
    "input_snr_db",
    "snr_grid",
    "trials",
    "seed",
    "epsilon",
    "gamma_override",
    "algorithms",
    "p",
    "r",
    "format",
    "out",
    "workers",
)


def run_command(args: argparse.Namespace) -> int:
    """
    Execute `run`: merge config file and flags, sweep, write the report.

    Returns:
        int: Exit code
    """
    file_values: Dict = load_config_file(args.config_file) if args.config_file else {}
    values = merge_overrides(file_values, {name: getattr(args, name) for name in RUN_FLAGS})
    cfg = build_experiment_config(values)

    try:
        fmt = ReportFormat(values.get("format", ReportFormat.CSV.value))
    except ValueError as e:
        raise ConfigError(f"unknown report format {values.get('format')!r}") from e
    workers = int(values.get("workers") or config.DEFAULT_WORKERS)
    if workers < 1:
        raise ConfigError(f"workers must be at least 1, got {workers}")
    out = values.get("out") or f"{cfg.experiment.value}.{fmt.value}"

    rows = run_experiment(cfg, workers=workers, progress=args.progress)
    emit_report(rows, fmt, out, metadata=report_metadata(cfg, workers))

    if args.summary:
        table = ConsoleFormatter.summary_table(summarize(rows), title=cfg.experiment.value)
        console.print(table)
    err_console.print(f"[green]Wrote {len(rows)} rows to {out}[/green]")
    return EXIT_OK


def diagnose_command(args: argparse.Namespace) -> int:
    """
    Execute `diagnose` on a generated pair; with neither flag both are printed.

    Returns:
        int: Exit code
    """
    show_coherence = args.coherence or not args.rip
    show_rip = args.rip or not args.coherence

    if Basis(args.basis) == Basis.FOURIER:
        psi = fourier_basis(args.n)
    else:
        psi = random_frame(args.n, derive_seed(args.seed, 0))
    phi = gaussian_measurement(args.m, args.n, derive_seed(args.seed, 1))

    values = {}
    if show_coherence:
        values["mutual coherence"] = mutual_coherence(phi, psi)
    if show_rip:
        values[f"empirical delta_{args.k}"] = rip_estimate(
            phi, args.k, args.trials, derive_seed(args.seed, 2)
        )
    title = f"{args.basis} basis, N={args.n}, M={args.m}"
    console.print(ConsoleFormatter.diagnostics_table(values, title=title))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line entry point.

    Args:
        argv (Optional[List[str]]): Arguments, defaults to sys.argv[1:]

    Returns:
        int: 0 on success, 1 on configuration errors, 2 on I/O errors
    """
    handlers = {"run": run_command, "diagnose": diagnose_command}
    try:
        args = build_parser().parse_args(argv)
        try:
            configure_logging(args.log_level, args.log_file)
        except OSError as e:
            path = args.log_file or config.LOG_FILE
            raise ReportIOError(path, e.strerror or str(e), what="log file") from e

        invalid = config.get_missing_config()
        if invalid:
            err_console.print(f"[red]Invalid settings: {', '.join(invalid)}[/red]")
            return EXIT_CONFIG

        return handlers[args.command](args)
    except ReportIOError as e:
        err_console.print(f"[red]{format_error_for_user(e)}[/red]")
        return EXIT_IO
    except EmpError as e:
        logger.debug("command failed", exc_info=True)
        err_console.print(f"[red]{format_error_for_user(e)}[/red]")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
