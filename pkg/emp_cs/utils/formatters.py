"""
Formatter utilities for emp_cs reports and console output.

Contains the fixed-precision field formatting shared by the CSV and JSON
reports, plus rich tables for sweep summaries and diagnostics.
"""

from typing import Any, Dict, List, Optional, Sequence

from rich.table import Table

from emp_cs.recovery.model import ReportRow, SummaryRow

REPORT_FIELDS = (
    "algorithm",
    "m",
    "trial",
    "srer_db",
    "snr_db",
    "ip",
    "recovered",
    "iterations",
    "termination",
)
# SNR-grid sweeps add the input noise level after the algorithm
SNR_REPORT_FIELDS = REPORT_FIELDS[:1] + ("input_snr_db",) + REPORT_FIELDS[1:]
FLOAT_FIELDS = ("srer_db", "snr_db", "ip")
DECIMALS = 6


class ReportFormatter:
    """Formats report rows for CSV and JSON output."""

    @staticmethod
    def round_float(value: Optional[float]) -> Optional[float]:
        """Round to the report precision; negative zero becomes zero."""
        if value is None:
            return None
        rounded = round(float(value), DECIMALS)
        return 0.0 if rounded == 0 else rounded

    @staticmethod
    def format_float(value: Optional[float]) -> str:
        if value is None:
            return ""
        return f"{ReportFormatter.round_float(value):.{DECIMALS}f}"

    @staticmethod
    def format_flag(value: Optional[bool]) -> str:
        if value is None:
            return ""
        return "true" if value else "false"

    @staticmethod
    def to_csv_fields(row: ReportRow, fields: Sequence[str] = REPORT_FIELDS) -> List[str]:
        """
        Format one row as CSV fields in `fields` order.

        Args:
            row (ReportRow): Report row
            fields (Sequence[str]): REPORT_FIELDS or SNR_REPORT_FIELDS

        Returns:
            List[str]: Field strings; absent values are empty
        """
        text = {
            "algorithm": row.algorithm,
            "input_snr_db": ReportFormatter.format_float(row.input_snr_db),
            "m": str(row.m),
            "trial": str(row.trial),
            "srer_db": ReportFormatter.format_float(row.srer_db),
            "snr_db": ReportFormatter.format_float(row.snr_db),
            "ip": ReportFormatter.format_float(row.ip),
            "recovered": ReportFormatter.format_flag(row.recovered),
            "iterations": str(row.iterations),
            "termination": row.termination,
        }
        return [text[name] for name in fields]

    @staticmethod
    def to_json_object(
        row: ReportRow, fields: Sequence[str] = REPORT_FIELDS
    ) -> Dict[str, Any]:
        """Row as a JSON object with floats rounded to the report precision."""
        data = row.model_dump()
        for name in FLOAT_FIELDS + ("input_snr_db",):
            data[name] = ReportFormatter.round_float(data[name])
        return {name: data[name] for name in fields}


class ConsoleFormatter:
    """Builds rich tables for the command line."""

    @staticmethod
    def _cell(value: Optional[float], spec: str = ".2f") -> str:
        return "-" if value is None else format(value, spec)

    @staticmethod
    def summary_table(summary: Sequence[SummaryRow], title: str = "Sweep summary") -> Table:
        """
        Table of per-(algorithm, m) means, one row per cell.

        Args:
            summary (Sequence[SummaryRow]): Output of summarize
            title (str): Table title

        Returns:
            Table: Rich table ready to print
        """
        with_snr = any(row.input_snr_db is not None for row in summary)
        table = Table(title=title)
        table.add_column("Algorithm", style="bold")
        if with_snr:
            table.add_column("Input SNR (dB)", justify="right")
        table.add_column("M", justify="right")
        table.add_column("Trials", justify="right")
        table.add_column("SRER (dB)", justify="right")
        table.add_column("SNR (dB)", justify="right")
        table.add_column("IP", justify="right")
        table.add_column("Recovery", justify="right")
        table.add_column("Iterations", justify="right")

        for row in summary:
            rate = None if row.recovery_rate is None else 100.0 * row.recovery_rate
            cells = [
                row.algorithm,
                str(row.m),
                str(row.trials),
                ConsoleFormatter._cell(row.mean_srer_db),
                ConsoleFormatter._cell(row.mean_snr_db),
                ConsoleFormatter._cell(row.mean_ip),
                "-" if rate is None else f"{rate:.0f}%",
                ConsoleFormatter._cell(row.mean_iterations, ".1f"),
            ]
            if with_snr:
                cells.insert(1, ConsoleFormatter._cell(row.input_snr_db, ".1f"))
            table.add_row(*cells)
        return table

    @staticmethod
    def diagnostics_table(values: Dict[str, float], title: str = "Diagnostics") -> Table:
        """Two-column table of named diagnostic values."""
        table = Table(title=title)
        table.add_column("Quantity", style="bold")
        table.add_column("Value", justify="right")
        for name, value in values.items():
            table.add_row(name, f"{value:.6f}")
        return table
