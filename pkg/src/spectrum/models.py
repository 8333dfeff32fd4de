from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from src.utils.errors import ValidationError


NORMALIZATION_TOL = 1e-12


class SpectrumError(ValidationError):
    def __init__(self, message: str, *, weight_sum: float | None = None) -> None:
        super().__init__(message)
        self.weight_sum = weight_sum


def _check_weights(weights: Sequence[float], *, what: str) -> None:
    if any(not math.isfinite(w) or w < 0 for w in weights):
        raise SpectrumError(f"{what} must be finite and >= 0, got {list(weights)!r}")
    total = math.fsum(weights)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise SpectrumError(f"{what} must sum to 1 (got sum {total!r})", weight_sum=total)


@dataclass(frozen=True)
class WeightedLevels:
    """Energies [J] paired with probability weights |c_n|^2."""

    energies: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "energies", tuple(float(e) for e in self.energies))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.energies:
            raise SpectrumError("A spectrum needs at least one level")
        if len(self.energies) != len(self.weights):
            raise SpectrumError(
                f"energies/weights length mismatch: {len(self.energies)} != {len(self.weights)}"
            )
        if any(not math.isfinite(e) for e in self.energies):
            raise SpectrumError(f"Level energies must be finite, got {list(self.energies)!r}")
        _check_weights(self.weights, what="Level weights")

    def __len__(self) -> int:
        return len(self.energies)

    @property
    def levels(self) -> list[tuple[float, float]]:
        return list(zip(self.energies, self.weights))

    def energy_array(self) -> np.ndarray:
        return np.asarray(self.energies, dtype=float)

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class InternalSpectrum(WeightedLevels):
    """
    Internal state of one subsystem as a superposition of energy eigenstates.

    Only |c_n|^2 is kept: every visibility formula depends on the moduli alone.
    """

    @classmethod
    def from_levels(cls, levels: Iterable[tuple[float, float]]) -> "InternalSpectrum":
        pairs = list(levels)
        return cls(tuple(e for e, _ in pairs), tuple(w for _, w in pairs))

    def shifted(self, offset: float) -> "InternalSpectrum":
        return InternalSpectrum(tuple(e + offset for e in self.energies), self.weights)


@dataclass(frozen=True)
class GroupedSpectrum(WeightedLevels):
    """Spectrum with degenerate energies merged; group energies strictly increasing."""

    tolerance: float = 0.0

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.tolerance < 0:
            raise SpectrumError(f"Grouping tolerance must be >= 0, got {self.tolerance!r}")
        gaps = np.diff(self.energy_array())
        if np.any(gaps <= self.tolerance):
            raise SpectrumError(
                f"Group energies must be strictly increasing with gaps > {self.tolerance!r}"
            )


@dataclass(frozen=True)
class MixtureEnsemble:
    """Statistical mixture: spectrum alpha prepared with probability p_alpha."""

    components: tuple[tuple[float, InternalSpectrum], ...]

    def __post_init__(self) -> None:
        comps = tuple((float(p), s) for p, s in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise SpectrumError("A mixture needs at least one component")
        _check_weights([p for p, _ in comps], what="Mixture probabilities")

    def __len__(self) -> int:
        return len(self.components)

    @property
    def probabilities(self) -> list[float]:
        return [p for p, _ in self.components]

    @property
    def spectra(self) -> list[InternalSpectrum]:
        return [s for _, s in self.components]
