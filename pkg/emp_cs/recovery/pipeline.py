"""
RecoveryPipeline class for emp_cs

Dispatches a recovery problem to a pursuit by algorithm name and turns
algorithm errors into a recorded outcome instead of an exception.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from emp_cs.recovery.baselines import cosamp_recover, mp_recover, omp_recover, romp_recover
from emp_cs.recovery.emp import emp_recover_noiseless, emp_recover_noisy
from emp_cs.recovery.error_handling import EmpError
from emp_cs.recovery.model import Algorithm, EmpConfig, RecoveryResult, StopRule
from emp_cs.recovery.problems import SparseProblem

logger = logging.getLogger(__name__)


@dataclass
class RecoveryOutcome:
    """Result of one pipeline call: either a RecoveryResult or the error it hit."""

    algorithm: Algorithm
    result: Optional[RecoveryResult] = None
    error: Optional[EmpError] = None

    @property
    def termination(self) -> str:
        if self.result is not None:
            return self.result.termination.value
        return type(self.error).__name__

    @property
    def iterations(self) -> int:
        return self.result.iterations if self.result is not None else 0

    def shat(self, n: int) -> np.ndarray:
        """Reconstruction, or the zero signal for a failed run."""
        return self.result.shat if self.result is not None else np.zeros(n)

    def chat(self, n: int) -> np.ndarray:
        return self.result.chat if self.result is not None else np.zeros(n)


class RecoveryPipeline:
    def __init__(
        self,
        stop: StopRule,
        emp_config: Optional[EmpConfig] = None,
        k: Optional[int] = None,
    ):
        self.stop = stop
        self.emp_config = emp_config or EmpConfig()
        self.k = k

    def recover(self, algorithm: Algorithm, problem: SparseProblem) -> RecoveryResult:
        """
        Run one algorithm on a problem; errors propagate.

        Args:
            algorithm (Algorithm): Pursuit to run
            problem (SparseProblem): Problem with column-normalized A

        Returns:
            RecoveryResult: chat in the basis psi, shat in the signal domain
        """
        algorithm = Algorithm(algorithm)
        kwargs = {"scales": problem.a_scales, "psi": problem.psi}

        if algorithm == Algorithm.MP:
            return mp_recover(problem.a, problem.y, self.stop, **kwargs)
        if algorithm == Algorithm.OMP:
            return omp_recover(problem.a, problem.y, self.stop, **kwargs)
        if algorithm == Algorithm.COSAMP:
            return cosamp_recover(problem.a, problem.y, self.k, self.stop, **kwargs)
        if algorithm == Algorithm.ROMP:
            return romp_recover(problem.a, problem.y, self.k, self.stop, **kwargs)
        if self.emp_config.noisy:
            return emp_recover_noisy(problem.a, problem.y, self.emp_config, **kwargs)
        return emp_recover_noiseless(problem.a, problem.y, self.emp_config, **kwargs)

    def process(self, algorithm: Algorithm, problem: SparseProblem) -> RecoveryOutcome:
        """
        Run one algorithm and record an error as the outcome.
        """
        algorithm = Algorithm(algorithm)
        try:
            result = self.recover(algorithm, problem)
            return RecoveryOutcome(algorithm=algorithm, result=result)
        except EmpError as e:
            logger.debug(f"{algorithm.value} failed: {type(e).__name__}: {e}")
            return RecoveryOutcome(algorithm=algorithm, error=e)
