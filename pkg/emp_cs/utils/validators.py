"""
Input validation utilities for emp_cs.

Contains validation functions for experiment parameters and command-line input.
"""

import math
from typing import Iterable, List, Optional, Sequence, Tuple


class InputValidator:
    """Collection of input validation methods."""

    @staticmethod
    def validate_m_grid(m_grid: Sequence[int], n: int) -> Tuple[bool, Optional[str]]:
        """
        Validate a grid of measurement counts.

        Args:
            m_grid (Sequence[int]): Measurement counts to sweep
            n (int): Signal dimension

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if not m_grid:
            return False, "m_grid must contain at least one measurement count."

        bad = [m for m in m_grid if not 1 <= m <= n]
        if bad:
            return False, f"m_grid values must lie in [1, {n}]; got {bad}."

        if len(set(m_grid)) != len(m_grid):
            return False, "m_grid contains duplicate values."

        return True, None

    @staticmethod
    def validate_algorithms(
        names: Sequence[str], allowed: Iterable[str]
    ) -> Tuple[bool, Optional[str]]:
        """
        Validate a list of algorithm names.

        Args:
            names (Sequence[str]): Requested algorithm names
            allowed (Iterable[str]): Known algorithm names

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        allowed = list(allowed)
        if not names:
            return False, "At least one algorithm must be selected."

        unknown = [name for name in names if name not in allowed]
        if unknown:
            return False, f"Unknown algorithms {unknown}; choose from {allowed}."

        if len(set(names)) != len(names):
            return False, "Algorithm list contains duplicates."

        return True, None

    @staticmethod
    def validate_snr_db(snr_db: float) -> Tuple[bool, Optional[str]]:
        """
        Validate an input SNR in dB.

        Args:
            snr_db (float): Target input SNR

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if not isinstance(snr_db, (int, float)) or not math.isfinite(snr_db):
            return False, "Input SNR must be a finite number of dB."

        return True, None

    @staticmethod
    def validate_snr_grid(levels: Sequence[float]) -> Tuple[bool, Optional[str]]:
        """
        Validate the input SNRs of a sweep.

        Args:
            levels (Sequence[float]): Input SNRs in dB

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if not levels:
            return False, "snr_grid must contain at least one SNR."

        for snr_db in levels:
            is_valid, error = InputValidator.validate_snr_db(snr_db)
            if not is_valid:
                return False, error

        if len(set(levels)) != len(levels):
            return False, "snr_grid contains duplicate values."

        return True, None

    @staticmethod
    def validate_power_law(p: float, r: float) -> Tuple[bool, Optional[str]]:
        """
        Validate power-law decay parameters.

        Args:
            p (float): Scale of the largest coefficient
            r (float): Decay exponent

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if p <= 0:
            return False, "Power-law scale p must be positive."

        if r <= 1:
            return False, "Power-law exponent r must exceed 1."

        return True, None

    @staticmethod
    def parse_int_list(text: str) -> Tuple[bool, Optional[str], List[int]]:
        """
        Parse a comma-separated list of integers.

        Args:
            text (str): Raw text such as "20,24,28"

        Returns:
            Tuple[bool, Optional[str], List[int]]: (is_valid, error_message, values)
        """
        values = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                values.append(int(part))
            except ValueError:
                return False, f"Not an integer: {part!r}", []

        if not values:
            return False, "Expected at least one integer.", []

        return True, None, values

    @staticmethod
    def parse_float_list(text: str) -> Tuple[bool, Optional[str], List[float]]:
        """
        Parse a comma-separated list of numbers.

        Args:
            text (str): Raw text such as "-6,-3,0,3"

        Returns:
            Tuple[bool, Optional[str], List[float]]: (is_valid, error_message, values)
        """
        values = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                values.append(float(part))
            except ValueError:
                return False, f"Not a number: {part!r}", []

        if not values:
            return False, "Expected at least one number.", []

        return True, None, values

    @staticmethod
    def parse_name_list(text: str) -> List[str]:
        """
        Parse a comma-separated list of names, dropping empty entries.

        Args:
            text (str): Raw text such as "EMP,OMP"

        Returns:
            List[str]: Stripped names
        """
        return [part.strip() for part in text.split(",") if part.strip()]
