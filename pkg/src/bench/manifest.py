"""Run manifests: everything needed to reproduce a benchmark's CSV files."""

import json
import os
import tempfile
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src import __version__


class RunEntry(BaseModel):
    """Outcome of one (solver, seed) job."""
    solver: str
    seed: int
    status: str = Field(description="ok, diverged or failed")
    seconds: float
    trace_file: Optional[str] = None
    message: Optional[str] = None
    lasso_objective: Optional[float] = Field(default=None, description="f(x) + nu*||Fx||_1 at the returned x")


class Manifest(BaseModel):
    version: str = __version__
    config: Dict
    config_hash: str
    seeds: List[int]
    datasets: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")
    runs: List[RunEntry] = Field(default_factory=list)
    aggregate_file: Optional[str] = None
    plot_file: Optional[str] = None

    @property
    def failures(self) -> List[RunEntry]:
        return [run for run in self.runs if run.status != "ok"]


def write_manifest(manifest: Manifest, path: str) -> None:
    """Writes the manifest as indented JSON, atomically."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(manifest.model_dump_json(indent=2))
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def load_manifest(path: str) -> Manifest:
    """
    Raises:
        FileNotFoundError: If `path` does not exist.
        ValueError: If the file is not a valid manifest.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Manifest not found: {path}")
    with open(path, "r") as f:
        try:
            return Manifest.model_validate(json.load(f))
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: {e}") from e
