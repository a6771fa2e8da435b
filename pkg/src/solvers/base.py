"""Abstract Interface for the Solver Layer.

Every solver (the accelerated method and each baseline) implements
`BaseSolver.run(problem, seed) -> SolverOutput`, so the bench runner and the
verification suite depend on this abstraction rather than on a concrete method.

The module also holds what all solvers share: the configuration model, the
trace record schema, effective-pass accounting with the divergence guard, and
the seeded sampling stream.
"""

import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config import LbarRule, OutputWeighting, settings
from src.exceptions import DivergenceError
from src.linalg import DenseVector
from src.problem.model import Problem, constraint_violation, objective


class SolverConfig(BaseModel):
    """Parameters shared by all solvers; each solver reads the fields it needs.

    Unset optional fields fall back to problem-derived defaults at run time.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    # --- budget ---
    max_passes: float = Field(default=20.0, gt=0)
    n_outer: Optional[int] = Field(default=None, ge=0, description="N; derived from max_passes when unset")
    inner: Optional[int] = Field(default=None, ge=1, description="m; defaults to n")
    iterations: Optional[int] = Field(default=None, ge=0, description="deterministic ADMM iteration count")

    # --- x-update ---
    chi: int = Field(default=1, ge=0, le=1)

    # --- accelerated schedule ---
    alpha2_init: float = 2.0 / 3.0
    alpha3_init: float = 0.1
    beta1: Optional[float] = Field(default=None, gt=0, description="defaults to N")
    beta2: Optional[float] = Field(default=None, gt=0, description="defaults to 1/N")
    output_weighting: OutputWeighting = OutputWeighting.ALGORITHM
    lbar_rule: LbarRule = LbarRule.GLOBAL

    # --- baselines ---
    beta: float = Field(default=1.0, gt=0, description="penalty for SVRG-ADMM, SADMM and ADMM")
    eta: Optional[float] = Field(default=None, gt=0, description="proximal weight for SVRG-ADMM and ADMM")
    eta0: Optional[float] = Field(default=None, gt=0, description="SADMM initial proximal weight")
    step_decay: bool = True


class TraceRecord(BaseModel):
    """One benchmark sample of a solver run."""
    model_config = ConfigDict(frozen=True)

    solver: str
    seed: int
    passes: float
    objective: float
    violation: float
    seconds: float


@dataclass
class SolverOutput:
    """Final primal-dual point and the recorded trace."""
    x: DenseVector
    y: DenseVector
    lam: DenseVector
    trace: List[TraceRecord] = field(default_factory=list)
    seed: int = 0


@dataclass(frozen=True)
class StepRecord:
    """Everything needed to re-check the x- and y-subproblems of one inner step."""
    s: int
    t: int
    sample: int
    x_prev: DenseVector
    y_prev: DenseVector
    lam_prev: DenseVector
    v: DenseVector
    x: DenseVector
    y: DenseVector
    lam: DenseVector
    theta: float
    rho: float
    eta: float
    chi: int


StepCallback = Callable[[StepRecord], None]


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator: a 64-bit seed fully determines the stream."""
    return np.random.Generator(np.random.Philox(seed))


def draw_sample(rng: np.random.Generator, n: int) -> int:
    """Draws i_t uniformly from {0, ..., n-1}."""
    return int(rng.integers(n))


class TraceRecorder:
    """
    Effective-pass accounting, trace cadence and the divergence guard.

    Passes are derived from integer counters (full gradients + stochastic
    gradients / n), so the pass grid is exact and identical across solvers
    that do the same work.

    Args:
        problem (Problem): Instance whose objective is traced.
        solver (str): Solver id written into each record.
        seed (int): Seed written into each record.
        inner (int): Inner-loop length, sets the intra-pass cadence ceil(m/4).
    """

    def __init__(self, problem: Problem, solver: str, seed: int, inner: int = 1):
        self.problem = problem
        self.solver = solver
        self.seed = seed
        self.every = max(1, math.ceil(inner / 4))
        self.full = 0
        self.stochastic = 0
        self.records: List[TraceRecord] = []
        self._start = time.perf_counter()
        self._initial: Optional[float] = None
        self._last_floor = 0

    @property
    def passes(self) -> float:
        return self.full + self.stochastic / self.problem.n

    def charge_full(self) -> None:
        self.full += 1

    def charge_stochastic(self, count: int = 1) -> None:
        self.stochastic += count

    def due(self, t: int) -> bool:
        """True at intra-pass cadence points and whenever a whole pass completes."""
        return t % self.every == 0 or math.floor(self.passes) > self._last_floor

    def record(self, x: DenseVector, y: DenseVector, outer: int = 0, inner: int = 0) -> None:
        """
        Appends a record for the point (x, y) unless no work happened since the last one.

        Raises:
            DivergenceError: If the objective is non-finite or exceeds
                `settings.divergence_factor` times its initial value.
        """
        passes = self.passes
        if self.records and passes <= self.records[-1].passes:
            return
        value = objective(self.problem, x, y)
        if self._initial is None:
            self._initial = value
        limit = settings.divergence_factor * self._initial
        if not math.isfinite(value) or (self._initial > 0 and value > limit):
            raise DivergenceError(f"objective {value!r} left the admissible range", outer, inner, (value,))
        self._last_floor = math.floor(passes)
        self.records.append(
            TraceRecord(
                solver=self.solver,
                seed=self.seed,
                passes=passes,
                objective=value,
                violation=constraint_violation(self.problem, x, y),
                seconds=time.perf_counter() - self._start,
            )
        )


def check_finite(outer: int, inner: int, *vectors: DenseVector) -> None:
    """Raises DivergenceError when any iterate holds NaN or Inf."""
    for vec in vectors:
        if not np.all(np.isfinite(vec)):
            raise DivergenceError("non-finite iterate", outer, inner)


class BaseSolver(ABC):
    """
    Abstract Base Class for constrained-ERM solvers.

    Attributes:
        config (SolverConfig): Run parameters.
        name (str): Solver id used in traces and file names.
    """

    def __init__(self, config: Optional[SolverConfig] = None, name: Optional[str] = None):
        self.config = config or SolverConfig()
        self.name = name or self.default_name

    @property
    @abstractmethod
    def default_name(self) -> str:
        """Identifier used when no explicit label is given."""

    @abstractmethod
    def run(self, problem: Problem, seed: int = 0, on_step: Optional[StepCallback] = None) -> SolverOutput:
        """
        Solves `problem`.

        Args:
            problem (Problem): The constrained ERM instance.
            seed (int): Seed of the sampling stream (ignored by deterministic solvers).
            on_step (StepCallback, optional): Receives a StepRecord after every inner step.

        Returns:
            SolverOutput: Final point and trace.
        """
