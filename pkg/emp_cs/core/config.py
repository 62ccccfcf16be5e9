"""
Configuration module for emp_cs.

Contains process-wide settings, numerical tolerances and logging setup.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from decouple import config as env_config
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

load_dotenv()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class AppConfig:
    """Main application configuration."""

    # App metadata
    APP_NAME: str = "emp-cs"
    APP_VERSION: str = "0.1.0"
    APP_DESCRIPTION: str = "Entropy-minimization matching pursuit benchmark"

    # Numerical tolerances
    DEFAULT_EPSILON: float = 1e-6
    CORRELATION_FLOOR: float = 1e-12
    RANK_TOLERANCE: float = 1e-10
    RESIDUAL_FLOOR: float = 1e-12
    ZERO_NORM: float = 1e-12
    TIE_TOLERANCE: float = 1e-12
    MIN_ENERGY_DROP: float = 1e-10  # relative to the residual energy
    SELECTION_RATIO: float = 0.5

    # Metrics
    SRER_CAP_DB: float = 300.0
    RECOVERY_TOLERANCE: float = 1e-4
    IP_BASE: float = 2.0

    # Sweep execution
    DEFAULT_WORKERS: int = env_config("EMP_WORKERS", default=1, cast=int)
    MAX_ITER_FACTOR: int = 10

    # Logging
    LOG_LEVEL: str = env_config("EMP_LOG_LEVEL", default="INFO")
    LOG_FILE: str = env_config("EMP_LOG_FILE", default="")

    def validate_config(self) -> Dict[str, bool]:
        """
        Validate configuration settings.

        Returns:
            Dict[str, bool]: Validation results for each setting
        """
        validation_results = {
            "default_epsilon": self.DEFAULT_EPSILON > 0,
            "correlation_floor": self.CORRELATION_FLOOR >= 0,
            "min_energy_drop": 0 < self.MIN_ENERGY_DROP < 1,
            "selection_ratio": 0 < self.SELECTION_RATIO <= 1,
            "rank_tolerance": 0 < self.RANK_TOLERANCE < 1,
            "srer_cap_db": self.SRER_CAP_DB > 0,
            "recovery_tolerance": self.RECOVERY_TOLERANCE > 0,
            "ip_base": self.IP_BASE > 1,
            "default_workers": self.DEFAULT_WORKERS >= 1,
            "log_level": self.LOG_LEVEL.upper() in logging.getLevelNamesMapping(),
        }

        return validation_results

    def get_missing_config(self) -> List[str]:
        """
        Get list of invalid configuration items.

        Returns:
            List[str]: List of invalid configuration keys
        """
        validation = self.validate_config()
        return [key for key, is_valid in validation.items() if not is_valid]


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """
    Configure root logging once for the CLI.

    Args:
        level (Optional[str]): Log level name, defaults to AppConfig.LOG_LEVEL
        log_file (Optional[str]): Optional file to mirror log records into
    """
    level = (level or config.LOG_LEVEL).upper()
    log_file = config.LOG_FILE if log_file is None else log_file

    handlers: List[logging.Handler] = [
        RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)
    ]
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(message)s",
        handlers=handlers,
        force=True,
    )


# Create global config instance
config = AppConfig()
