"""
Error handling for emp_cs.

Exception hierarchy shared by every module, plus helpers for logging
recorded failures and rendering errors for the command line.
"""

import logging
from typing import Any

logger = logging.getLogger(__name__)


class EmpError(Exception):
    """Base exception for emp_cs."""

    pass


# Linear algebra


class LinearAlgebraError(EmpError):
    """Error in the dense linear-algebra substrate."""

    pass


class ZeroVector(LinearAlgebraError):
    """A vector with zero l2 norm where a positive norm is required."""

    def __init__(self, what: str = "vector"):
        self.what = what
        super().__init__(f"{what} has zero l2 norm")


class ZeroColumn(LinearAlgebraError):
    """The dictionary contains a null atom."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} has zero l2 norm")


class RankDeficient(LinearAlgebraError):
    """Selected atoms are linearly dependent."""

    def __init__(self, rank: int, cols: int):
        self.rank = rank
        self.cols = cols
        super().__init__(f"sub-matrix has numerical rank {rank} < {cols} columns")


class DimensionMismatch(LinearAlgebraError):
    """Operand shapes do not agree."""

    def __init__(self, expected: Any, actual: Any, what: str = "operand"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected dimension {expected}, got {actual}")


class NonFiniteEntry(LinearAlgebraError):
    """A vector or matrix holds NaN or Inf."""

    pass


# Problem generation


class ProblemError(EmpError):
    """Error while generating bases, matrices or signals."""

    pass


class BadDimension(ProblemError):
    """A size argument is outside its admissible range."""

    pass


class BadParameter(ProblemError):
    """A model parameter is outside its admissible range."""

    pass


# Entropy


class EntropyError(EmpError):
    """Error in entropy evaluation."""

    pass


class NegativeWeight(EntropyError):
    """An objective weight is negative."""

    pass


class DegenerateHistory(EntropyError):
    """Previous representation already has zero conditional entropy."""

    pass


# Pursuits


class PursuitError(EmpError):
    """Error raised inside a pursuit loop."""

    pass


class NoAdmissibleAtom(PursuitError):
    """No column passes the correlation floor and residual-decrease test."""

    pass


class NonPositiveGamma(PursuitError):
    """The default entropy-ratio gate evaluates to a non-positive value."""

    pass


# Harness


class ConfigError(EmpError):
    """Invalid experiment configuration."""

    pass


class ReportIOError(EmpError):
    """A report or log file could not be written."""

    def __init__(self, path: str, reason: str, what: str = "report"):
        self.path = path
        super().__init__(f"cannot write {what} to {path}: {reason}")


def log_recovery_failure(algorithm: str, m: int, trial: int, error: Exception):
    """
    Log a recovery run that ended in an error recorded in the report.

    Args:
        algorithm (str): Algorithm name
        m (int): Number of measurements
        trial (int): Trial index
        error (Exception): The error that occurred
    """
    log_data = {
        "algorithm": algorithm,
        "m": m,
        "trial": trial,
        "error_type": type(error).__name__,
        "error": str(error),
    }
    logger.warning(f"Recovery run recorded as failed: {log_data}")


def format_error_for_user(error: Exception) -> str:
    """
    Format error message for command-line display.

    Args:
        error (Exception): The error to format

    Returns:
        str: User-facing error message
    """
    error_messages = {
        ConfigError: "Invalid experiment configuration",
        ReportIOError: "Could not write output",
        BadDimension: "Invalid problem dimensions",
        BadParameter: "Invalid model parameter",
        NonPositiveGamma: "Default gamma is not positive here; pass --gamma explicitly",
        ZeroVector: "Degenerate all-zero input",
    }

    for error_type, message in error_messages.items():
        if isinstance(error, error_type):
            return f"{message}: {error}"
    return f"Unexpected error: {error}"
