from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np

from src.utils.errors import NumericDomainError


@dataclass(frozen=True)
class SuperpositionGeometry:
    """
    Two-path superposition in a uniform field.

    g [m/s^2], delta_x = x1 - x2 [m] (signed), reference_x = mean height [m].
    """

    g: float
    delta_x: float
    reference_x: float = 0.0

    def __post_init__(self) -> None:
        for name in ("g", "delta_x", "reference_x"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NumericDomainError(f"Geometry field {name} must be finite, got {value!r}")

    def reversed(self) -> "SuperpositionGeometry":
        """Same superposition in an equal but opposite field."""
        return replace(self, g=-self.g)


@dataclass(frozen=True, eq=False)
class VisibilityTrace:
    times: np.ndarray
    visibility: np.ndarray
    small_time_approx: np.ndarray
    t_D: float
    n_subsystems: int = 1
    visibility_n: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.times)

    def to_frame(self):
        import pandas as pd  # type: ignore

        columns: dict[str, Any] = {
            "t_s": self.times,
            "visibility": self.visibility,
            "small_time_approx": self.small_time_approx,
        }
        if self.n_subsystems > 1 and self.visibility_n is not None:
            columns["visibility_N"] = self.visibility_n
        return pd.DataFrame(columns)


@dataclass(frozen=True)
class DephasingReport:
    t_D: float
    t_ND: float
    purity_sum: float
    lower_bound_log: float
    n_subsystems: int = 1
    delta_E: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "t_d_s": _finite_or_none(self.t_D),
            "t_nd_s": _finite_or_none(self.t_ND),
            "purity_sum": self.purity_sum,
            "lower_bound_log": self.lower_bound_log,
        }


def _finite_or_none(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None
