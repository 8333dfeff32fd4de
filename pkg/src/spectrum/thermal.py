from __future__ import annotations

import logging
import math

import numpy as np

from src.spectrum.models import InternalSpectrum, SpectrumError
from src.units.constants import CODATA, PhysicalConstants, thermal_energy
from src.utils.errors import NumericDomainError


logger = logging.getLogger(__name__)


def thermal_oscillator_spectrum(
    hbar_omega: float,
    T: float,
    tail_eps: float = 1e-12,
    *,
    constants: PhysicalConstants = CODATA,
) -> InternalSpectrum:
    """
    Boltzmann-weighted harmonic oscillator levels E_k = k * hbar_omega.

    Weights are geometric, w_k proportional to r^k with r = exp(-hbar_omega / k_B T).
    The ladder is cut at the smallest K whose tail mass r^K drops below
    `tail_eps`, then renormalized.
    """
    if not (hbar_omega > 0 and math.isfinite(hbar_omega)):
        raise NumericDomainError(f"hbar_omega must be > 0 J, got {hbar_omega!r}")
    if not (T > 0 and math.isfinite(T)):
        raise NumericDomainError(f"Temperature must be > 0 K, got {T!r}")
    if not (0 < tail_eps < 1):
        raise NumericDomainError(f"tail_eps must lie in (0, 1), got {tail_eps!r}")

    x = hbar_omega / thermal_energy(T, constants)  # -ln r
    # r^K < tail_eps  <=>  K > ln(1/tail_eps) / x
    count = max(1, math.floor(math.log(1.0 / tail_eps) / x) + 1)
    k = np.arange(count, dtype=float)
    weights = np.exp(-k * x)
    weights /= weights.sum()
    logger.debug("Thermal spectrum: kT/hbar_omega=%g levels=%d", 1.0 / x, count)
    return InternalSpectrum(tuple(k * hbar_omega), tuple(weights))


def geometric_energy_variance(hbar_omega: float, T: float, *, constants: PhysicalConstants = CODATA) -> float:
    """Closed-form Var(E) of the untruncated thermal oscillator, (hbar_omega)^2 r / (1 - r)^2."""
    x = hbar_omega / thermal_energy(T, constants)
    # r / (1 - r)^2 == 1 / (4 sinh^2(x / 2))
    return hbar_omega * hbar_omega / (4.0 * math.sinh(0.5 * x) ** 2)


def thermal_variance(N: int, T: float, *, constants: PhysicalConstants = CODATA) -> float:
    """Classical thermal energy spread sqrt(N) k_B T of N independent degrees of freedom [J]."""
    if int(N) != N or N < 1:
        raise NumericDomainError(f"Degree-of-freedom count must be an integer >= 1, got {N!r}")
    return math.sqrt(N) * thermal_energy(T, constants)


def uniform_spectrum(count: int, spacing: float) -> InternalSpectrum:
    """`count` equally weighted, equally spaced levels 0, spacing, 2 spacing, ..."""
    if int(count) != count or count < 1:
        raise SpectrumError(f"Level count must be an integer >= 1, got {count!r}")
    if count > 1 and not (spacing > 0 and math.isfinite(spacing)):
        raise NumericDomainError(f"Level spacing must be > 0 J, got {spacing!r}")
    count = int(count)
    return InternalSpectrum(tuple(k * spacing for k in range(count)), tuple([1.0 / count] * count))
