"""
Report files, sweep summaries and experiment config files for emp_cs.
"""

import csv
import json
import logging
from collections import OrderedDict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from decouple import Csv, RepositoryEnv
from pydantic import ValidationError

from emp_cs import __version__
from emp_cs.recovery.error_handling import ConfigError, ReportIOError
from emp_cs.recovery.model import ExperimentConfig, ReportFormat, ReportRow, SummaryRow
from emp_cs.utils.formatters import REPORT_FIELDS, SNR_REPORT_FIELDS, ReportFormatter

logger = logging.getLogger(__name__)

RUN_OPTION_KEYS = ("format", "out", "workers")

# Config-file keys and how their raw text is cast
CONFIG_CASTS = {
    "experiment": str,
    "n": int,
    "k": int,
    "basis": str,
    "m_grid": Csv(int),
    "input_snr_db": float,
    "snr_grid": Csv(float),
    "trials": int,
    "seed": int,
    "epsilon": float,
    "gamma_override": float,
    "algorithms": Csv(),
    "p": float,
    "r": float,
    "format": str,
    "out": str,
    "workers": int,
}
CONFIG_ALIASES = {
    "snr_db": "input_snr_db",
    "gamma": "gamma_override",
    "m-grid": "m_grid",
    "snr-grid": "snr_grid",
}


def report_fields(rows: Sequence[ReportRow]) -> Tuple[str, ...]:
    """Report columns: the fixed set, plus input_snr_db for SNR-grid sweeps."""
    if any(row.input_snr_db is not None for row in rows):
        return SNR_REPORT_FIELDS
    return REPORT_FIELDS


def emit_report(
    rows: Sequence[ReportRow],
    fmt: Union[ReportFormat, str],
    path: Union[str, Path],
    metadata: Optional[Dict[str, Any]] = None,
):
    """
    Write report rows as CSV or JSON.

    Args:
        rows (Sequence[ReportRow]): Rows in report order; rows of an SNR-grid
            sweep add the input_snr_db column
        fmt (Union[ReportFormat, str]): Output format
        path (Union[str, Path]): Destination file
        metadata (Optional[Dict[str, Any]]): Written to `<path>.meta.json` when given
    """
    fmt = ReportFormat(fmt)
    path = Path(path)
    fields = report_fields(rows)
    try:
        with path.open("w", newline="", encoding="utf-8") as handle:
            if fmt == ReportFormat.CSV:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(fields)
                for row in rows:
                    writer.writerow(ReportFormatter.to_csv_fields(row, fields))
            else:
                objects = [ReportFormatter.to_json_object(row, fields) for row in rows]
                json.dump(objects, handle, indent=2)
                handle.write("\n")

        if metadata is not None:
            meta_path = path.with_name(path.name + ".meta.json")
            with meta_path.open("w", encoding="utf-8") as handle:
                json.dump(metadata, handle, indent=2, sort_keys=True)
                handle.write("\n")
    except OSError as e:
        raise ReportIOError(str(path), e.strerror or str(e)) from e

    logger.info(f"Wrote {len(rows)} rows to {path} ({fmt.value})")


def report_metadata(cfg: ExperimentConfig, workers: int) -> Dict[str, Any]:
    """Sidecar metadata describing how a report was produced."""
    return {
        "library_version": __version__,
        "config": cfg.model_dump(mode="json"),
        "workers": workers,
        "rows": len(cfg.snr_levels) * len(cfg.m_grid) * cfg.trials * len(cfg.algorithms),
    }


def _mean(values: List[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return sum(present) / len(present)


def summarize(rows: Sequence[ReportRow]) -> List[SummaryRow]:
    """
    Per-(algorithm, m) means over trials, split by input SNR in SNR-grid sweeps.

    Cells keep the order in which they first appear in `rows`; within a cell
    values are accumulated in ascending trial order.

    Args:
        rows (Sequence[ReportRow]): Report rows

    Returns:
        List[SummaryRow]: One entry per (input SNR, algorithm, m)
    """
    cells: "OrderedDict[tuple, List[ReportRow]]" = OrderedDict()
    for row in rows:
        cells.setdefault((row.input_snr_db, row.m, row.algorithm), []).append(row)

    summary = []
    for (input_snr_db, m, algorithm), cell in cells.items():
        cell = sorted(cell, key=lambda row: row.trial)
        flags = [None if row.recovered is None else float(row.recovered) for row in cell]
        summary.append(
            SummaryRow(
                algorithm=algorithm,
                m=m,
                trials=len(cell),
                mean_srer_db=_mean([row.srer_db for row in cell]),
                mean_snr_db=_mean([row.snr_db for row in cell]),
                mean_ip=_mean([row.ip for row in cell]),
                recovery_rate=_mean(flags),
                mean_iterations=_mean([float(row.iterations) for row in cell]),
                input_snr_db=input_snr_db,
            )
        )
    return summary


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a flat `key = value` experiment file.

    List values (`m_grid`, `snr_grid`, `algorithms`) are comma-separated.

    Args:
        path (Union[str, Path]): Config file

    Returns:
        Dict[str, Any]: Values cast to their field types
    """
    try:
        repository = RepositoryEnv(str(path))
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror or e}") from e

    values: Dict[str, Any] = {}
    for raw_key, raw_value in repository.data.items():
        key = CONFIG_ALIASES.get(raw_key.strip().lower(), raw_key.strip().lower())
        if key not in CONFIG_CASTS:
            raise ConfigError(f"unknown key {raw_key!r} in {path}")
        try:
            values[key] = CONFIG_CASTS[key](raw_value)
        except ValueError as e:
            raise ConfigError(f"bad value for {key} in {path}: {raw_value!r}") from e

    logger.debug(f"Loaded {len(values)} settings from {path}")
    return values


def merge_overrides(file_values: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """File values updated by every override that is not None."""
    merged = dict(file_values)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return merged


def build_experiment_config(values: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate merged settings into an ExperimentConfig.

    Args:
        values (Dict[str, Any]): Field values plus optional `p`, `r` and run options

    Returns:
        ExperimentConfig: Validated configuration
    """
    fields = {
        key: value
        for key, value in values.items()
        if key not in RUN_OPTION_KEYS and value is not None
    }
    p, r = fields.pop("p", None), fields.pop("r", None)
    if p is not None or r is not None:
        fields["power_law"] = {"p": p, "r": r}

    try:
        return ExperimentConfig(**fields)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(problems) from e
