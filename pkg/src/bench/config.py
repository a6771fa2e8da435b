"""Benchmark run configuration.

A run is described by one TOML file: flat top-level keys, one `[[solvers]]`
table per solver and either `dataset = "<path>"` or a `[synthetic]` table.
Unknown keys anywhere are validation errors. See README.md for the grammar.
"""

import hashlib
import json
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config import LossKind, SolverKind, settings
from src.solvers.base import SolverConfig


class SolverSpec(SolverConfig):
    """One `[[solvers]]` entry: a solver kind, its label and its parameters."""
    kind: SolverKind
    label: Optional[str] = Field(default=None, description="trace id; defaults to the kind")
    max_passes: Optional[float] = Field(default=None, gt=0, description="defaults to the run-level budget")

    @property
    def name(self) -> str:
        return self.label or self.kind.value

    def solver_config(self, run_max_passes: float) -> SolverConfig:
        """Strips kind/label; the run-level budget applies unless this entry sets its own."""
        values = self.model_dump(exclude={"kind", "label"})
        if values["max_passes"] is None:
            values["max_passes"] = run_max_passes
        return SolverConfig(**values)


class SyntheticSpec(BaseModel):
    """Parameters of a generated dataset, used instead of a LIBSVM file."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(default=100, ge=1)
    d: int = Field(default=20, ge=1)
    seed: int = 0
    feature_scale: float = Field(default=1.0, gt=0)
    density: float = Field(default=1.0, gt=0, le=1)
    noise: float = Field(default=0.1, ge=0)
    chain_graph: bool = Field(default=True, description="chain graph; false builds the correlation graph")


class RunConfig(BaseModel):
    """A complete benchmark run."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    dataset: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None
    n_features: Optional[int] = Field(default=None, ge=1)
    loss: LossKind = LossKind.LOGISTIC
    nu: float = Field(default_factory=lambda: settings.default_nu, ge=0)
    threshold: float = Field(default_factory=lambda: settings.default_graph_threshold, gt=0, lt=1)
    solvers: List[SolverSpec] = Field(min_length=1)
    seeds: List[int] = Field(default_factory=lambda: list(range(10)), min_length=1)
    max_passes: float = Field(default=20.0, gt=0)
    output_dir: str = "results"
    workers: Optional[int] = Field(default=None, ge=1, description="defaults to the number of CPUs")
    record_wall_time: bool = False

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        if (self.dataset is None) == (self.synthetic is None):
            raise ValueError("exactly one of `dataset` and `[synthetic]` must be given")
        names = [spec.name for spec in self.solvers]
        if len(set(names)) != len(names):
            raise ValueError(f"solver labels must be unique, got {names}")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError(f"seeds must be unique, got {self.seeds}")
        return self

    @property
    def dataset_name(self) -> str:
        if self.dataset is None:
            return "synthetic"
        return os.path.splitext(os.path.basename(self.dataset))[0]

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form; output_dir and workers do not affect results and are excluded."""
        payload = self.model_dump(mode="json", exclude={"output_dir", "workers"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


def load_run_config(path: str) -> RunConfig:
    """
    Parses a TOML run configuration.

    A relative `dataset` path is resolved against the config file's directory,
    so the stored config (and its manifest) stays valid from any working directory.

    Raises:
        FileNotFoundError: If `path` does not exist.
        ValueError: On TOML syntax errors or invalid/unknown keys.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found: {path}")
    with open(path, "rb") as f:
        try:
            raw = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ValueError(f"{path}: {e}") from e
    dataset = raw.get("dataset")
    if isinstance(dataset, str) and not os.path.isabs(dataset):
        raw["dataset"] = os.path.normpath(os.path.join(os.path.dirname(os.path.abspath(path)), dataset))
    return RunConfig.model_validate(raw)
