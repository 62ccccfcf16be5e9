from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from emp_cs.core.config import config
from emp_cs.utils.validators import InputValidator


class Termination(str, Enum):
    """Why a recovery run stopped."""

    RESIDUAL_BELOW_EPSILON = "ResidualBelowEpsilon"
    SPARSITY_REACHED = "SparsityReached"
    ENTROPY_GATE = "EntropyGate"
    ITERATION_CAP = "IterationCap"
    NO_ADMISSIBLE_ATOM = "NoAdmissibleAtom"
    RESIDUAL_STAGNATION = "ResidualStagnation"


class StopMode(str, Enum):
    KNOWN_SPARSITY = "KnownSparsity"
    RESIDUAL_THRESHOLD = "ResidualThreshold"
    BOTH = "Both"


class Experiment(str, Enum):
    NOISELESS_KNOWN_K = "NoiselessKnownK"
    NOISELESS_UNKNOWN_K = "NoiselessUnknownK"
    NOISY_SPARSE = "NoisySparse"
    NOISY_COMPRESSIBLE = "NoisyCompressible"

    @property
    def noisy(self) -> bool:
        return self in (Experiment.NOISY_SPARSE, Experiment.NOISY_COMPRESSIBLE)


class Basis(str, Enum):
    FOURIER = "Fourier"
    RANDOM_FRAME = "RandomFrame"


class Algorithm(str, Enum):
    MP = "MP"
    OMP = "OMP"
    COSAMP = "CoSaMP"
    ROMP = "ROMP"
    EMP = "EMP"


class ReportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# Recovery configuration models
class StopRule(BaseModel):
    """Halting rule shared by the greedy baselines"""

    model_config = ConfigDict(frozen=True)

    mode: StopMode
    k: Optional[int] = Field(default=None, ge=1)
    epsilon: Optional[float] = Field(default=None, gt=0)
    max_iter: Optional[int] = Field(default=None, ge=1)  # None -> 10 * M

    @model_validator(mode="after")
    def check_mode_fields(self) -> "StopRule":
        if self.uses_sparsity and self.k is None:
            raise ValueError(f"{self.mode.value} stop rule needs k")
        if self.uses_threshold and self.epsilon is None:
            raise ValueError(f"{self.mode.value} stop rule needs epsilon")
        return self

    @classmethod
    def known_sparsity(cls, k: int, max_iter: Optional[int] = None) -> "StopRule":
        return cls(mode=StopMode.KNOWN_SPARSITY, k=k, max_iter=max_iter)

    @classmethod
    def residual_threshold(
        cls, epsilon: float, max_iter: Optional[int] = None
    ) -> "StopRule":
        return cls(mode=StopMode.RESIDUAL_THRESHOLD, epsilon=epsilon, max_iter=max_iter)

    @classmethod
    def both(cls, k: int, epsilon: float, max_iter: Optional[int] = None) -> "StopRule":
        return cls(mode=StopMode.BOTH, k=k, epsilon=epsilon, max_iter=max_iter)

    @property
    def uses_sparsity(self) -> bool:
        return self.mode in (StopMode.KNOWN_SPARSITY, StopMode.BOTH)

    @property
    def uses_threshold(self) -> bool:
        return self.mode in (StopMode.RESIDUAL_THRESHOLD, StopMode.BOTH)

    def resolve_max_iter(self, m: int) -> int:
        return self.max_iter or config.MAX_ITER_FACTOR * m


class EmpConfig(BaseModel):
    """Parameters of an entropy-minimization pursuit run"""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(default=config.DEFAULT_EPSILON, gt=0)
    gamma: Optional[float] = Field(default=None, gt=0)  # None -> noiseless mode
    max_iter: Optional[int] = Field(default=None, ge=1)  # None -> 10 * M
    correlation_floor: float = Field(default=config.CORRELATION_FLOOR, ge=0)
    selection_ratio: float = Field(default=config.SELECTION_RATIO, gt=0, le=1)

    @property
    def noisy(self) -> bool:
        return self.gamma is not None

    def resolve_max_iter(self, m: int) -> int:
        return self.max_iter or config.MAX_ITER_FACTOR * m


# Experiment models
class PowerLaw(BaseModel):
    """Decay profile P * i^(-r) of a compressible signal"""

    p: float
    r: float

    @model_validator(mode="after")
    def check_decay(self) -> "PowerLaw":
        is_valid, error = InputValidator.validate_power_law(self.p, self.r)
        if not is_valid:
            raise ValueError(error)
        return self


class ExperimentConfig(BaseModel):
    """One seeded sweep over measurement counts"""

    model_config = ConfigDict(frozen=True)

    experiment: Experiment
    n: int = Field(ge=2)
    k: Optional[int] = Field(default=None, ge=1)
    basis: Basis = Basis.FOURIER
    m_grid: Tuple[int, ...]
    input_snr_db: Optional[float] = None
    snr_grid: Optional[Tuple[float, ...]] = None  # sweeps several input SNRs
    trials: int = Field(default=1, ge=1)
    seed: int = 0
    epsilon: float = Field(default=config.DEFAULT_EPSILON, gt=0)
    gamma_override: Optional[float] = Field(default=None, gt=0)
    algorithms: Tuple[Algorithm, ...] = tuple(Algorithm)
    power_law: Optional[PowerLaw] = None

    @field_validator("algorithms", mode="before")
    @classmethod
    def parse_algorithms(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = InputValidator.parse_name_list(value)
        canonical = {a.value.lower(): a.value for a in Algorithm}
        names = [
            item.value
            if isinstance(item, Algorithm)
            else canonical.get(str(item).lower(), item)
            for item in value
        ]
        is_valid, error = InputValidator.validate_algorithms(
            names, [a.value for a in Algorithm]
        )
        if not is_valid:
            raise ValueError(error)
        return tuple(names)

    @field_validator("snr_grid", mode="before")
    @classmethod
    def parse_snr_grid(cls, value: Any) -> Any:
        if isinstance(value, str):
            is_valid, error, value = InputValidator.parse_float_list(value)
            if not is_valid:
                raise ValueError(error)
        return None if value is None else tuple(value)

    @field_validator("m_grid", mode="before")
    @classmethod
    def parse_m_grid(cls, value: Any) -> Any:
        if isinstance(value, str):
            is_valid, error, value = InputValidator.parse_int_list(value)
            if not is_valid:
                raise ValueError(error)
        return tuple(value)

    @model_validator(mode="after")
    def check_experiment(self) -> "ExperimentConfig":
        is_valid, error = InputValidator.validate_m_grid(self.m_grid, self.n)
        if not is_valid:
            raise ValueError(error)

        if self.experiment.noisy:
            if self.input_snr_db is None and not self.snr_grid:
                raise ValueError(f"{self.experiment.value} requires input_snr_db or snr_grid")
            levels = self.snr_grid or (self.input_snr_db,)
            is_valid, error = InputValidator.validate_snr_grid(levels)
            if not is_valid:
                raise ValueError(error)
        elif self.snr_grid:
            raise ValueError("snr_grid applies to noisy experiments only")

        if self.experiment == Experiment.NOISY_COMPRESSIBLE:
            if self.power_law is None:
                raise ValueError("NoisyCompressible requires power_law (p, r)")
        else:
            if self.k is None:
                raise ValueError(f"{self.experiment.value} requires k")
            if self.k > self.n:
                raise ValueError(f"k={self.k} exceeds n={self.n}")

        if self.basis == Basis.FOURIER and self.n % 2:
            raise ValueError("Fourier basis requires even n")

        return self

    @property
    def snr_levels(self) -> Tuple[Optional[float], ...]:
        """Input SNRs the sweep visits; (None,) for noiseless experiments."""
        if not self.experiment.noisy:
            return (None,)
        return self.snr_grid or (self.input_snr_db,)


class ReportRow(BaseModel):
    """One (algorithm, m, trial) outcome"""

    algorithm: str
    input_snr_db: Optional[float] = None  # SNR-grid sweeps only
    m: int
    trial: int
    srer_db: float
    snr_db: Optional[float] = None  # noisy experiments only
    ip: Optional[float] = None
    recovered: Optional[bool] = None  # NoiselessKnownK only
    iterations: int
    termination: str


@dataclass
class RecoveryResult:
    """Outcome of one pursuit run."""

    chat: np.ndarray
    shat: np.ndarray
    iterations: int
    residual_trace: List[float] = field(default_factory=list)
    entropy_trace: List[float] = field(default_factory=list)
    index_trace: List[int] = field(default_factory=list)
    coefficient_trace: List[float] = field(default_factory=list)
    support: Tuple[int, ...] = ()
    termination: Termination = Termination.ITERATION_CAP

    def to_dict(self) -> Dict[str, Any]:
        """Convert result to a JSON-friendly dictionary."""
        return {
            "chat": self.chat.tolist(),
            "shat": self.shat.tolist(),
            "iterations": self.iterations,
            "residual_trace": self.residual_trace,
            "entropy_trace": self.entropy_trace,
            "index_trace": self.index_trace,
            "coefficient_trace": self.coefficient_trace,
            "support": list(self.support),
            "termination": self.termination.value,
        }


class SummaryRow(BaseModel):
    """Per-(algorithm, m) means over trials"""

    algorithm: str
    input_snr_db: Optional[float] = None  # SNR-grid sweeps only
    m: int
    trials: int
    mean_srer_db: float
    mean_snr_db: Optional[float] = None
    mean_ip: Optional[float] = None
    recovery_rate: Optional[float] = None
    mean_iterations: float
