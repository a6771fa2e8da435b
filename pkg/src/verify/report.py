"""Machine-readable outcome of a verification check."""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class CheckReport(BaseModel):
    """
    Result of one check.

    Attributes:
        name (str): Check identifier, also used to dispatch witness replay.
        passed (bool): Whether every case satisfied the checked property.
        margin (float): Worst-case slack; non-positive for a failed check.
        witness (dict, optional): Inputs reproducing the worst case, with
            vectors stored as lists of floats.
        detail (str): One-line human-readable summary.
    """
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    margin: float
    witness: Optional[Dict[str, Any]] = None
    detail: str = ""

    @model_validator(mode="after")
    def _failed_checks_carry_witness(self) -> "CheckReport":
        if not self.passed and self.witness is None:
            raise ValueError(f"failed check {self.name!r} has no witness")
        return self

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: margin={self.margin:.6e} {self.detail}".rstrip()


def to_list(vec: np.ndarray) -> List[float]:
    """Serializes a vector; `float` round-trips every double exactly through JSON."""
    return [float(v) for v in np.asarray(vec, dtype=np.float64).reshape(-1)]


def from_list(values: List[float]) -> np.ndarray:
    return np.asarray(values, dtype=np.float64)
