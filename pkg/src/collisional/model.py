"""
Collisional decoherence by a thermal gas of scatterers, in the small-separation
limit, and its competition with gravitational dephasing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Optional, Union

import numpy as np

from src.dephasing.models import SuperpositionGeometry
from src.dephasing.timescales import n_subsystem_dephasing_time
from src.dephasing.visibility import check_subsystem_count
from src.units.constants import CODATA, PhysicalConstants, per_cm3_to_per_m3, per_m3_to_per_cm3, thermal_energy
from src.utils.errors import NoDecoherenceError, NumericDomainError


logger = logging.getLogger(__name__)

# Ideal gas at 1 atm and 293 K: p / (k_B T) = 101325 / (1.380649e-23 * 293) ~ 2.5e25 m^-3.
ATMOSPHERIC_DENSITY_PER_CM3 = 2.5e19


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise NumericDomainError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class CollisionalBath:
    """
    Thermal gas of scatterers.

    n [m^-3], sigma [m^2], m_scatterer [kg], T [K]. A density of exactly 0 is
    accepted and stands for a perfect vacuum.
    """

    n: float
    sigma: float
    m_scatterer: float
    T: float

    def __post_init__(self) -> None:
        if not (self.n >= 0 and math.isfinite(self.n)):
            raise NumericDomainError(f"Scatterer density must be finite and >= 0 m^-3, got {self.n!r}")
        _require_positive(sigma=self.sigma, m_scatterer=self.m_scatterer, T=self.T)

    def with_density(self, n: float) -> "CollisionalBath":
        return CollisionalBath(n=n, sigma=self.sigma, m_scatterer=self.m_scatterer, T=self.T)


@dataclass(frozen=True)
class CrossoverReport:
    t_ND: float
    t_Coll: float
    n_crossover: float
    gravitational_dominates: bool

    @property
    def n_crossover_per_cm3(self) -> float:
        return per_m3_to_per_cm3(self.n_crossover)

    def to_dict(self) -> dict[str, Any]:
        return {
            "t_coll_s": self.t_Coll if math.isfinite(self.t_Coll) else None,
            "n_crossover_per_m3": self.n_crossover,
            "n_crossover_per_cm3": self.n_crossover_per_cm3,
            "gravitational_dominates": self.gravitational_dominates,
        }


def q2v_thermal(m: float, T: float, *, constants: PhysicalConstants = CODATA) -> float:
    """Thermal average <q^2 v> = 4 (m/pi)^(1/2) (2 k_B T)^(3/2) [kg^2 m^3 / s^3]."""
    _require_positive(m=m, T=T)
    return 4.0 * math.sqrt(m / math.pi) * (2.0 * thermal_energy(T, constants)) ** 1.5


def lambda_rate(bath: CollisionalBath, *, constants: PhysicalConstants = CODATA) -> float:
    """Localization rate Lambda = n sigma <q^2 v> / (3 hbar^2) [m^-2 s^-1]."""
    q2v = q2v_thermal(bath.m_scatterer, bath.T, constants=constants)
    return bath.n * bath.sigma * q2v / (3.0 * constants.hbar**2)


def collisional_time(bath: CollisionalBath, delta_x: float, *, constants: PhysicalConstants = CODATA) -> float:
    """t_Coll = 1 / (Lambda dx^2) [s]."""
    if not (delta_x != 0 and math.isfinite(delta_x)):
        raise NumericDomainError(f"Path separation must be finite and nonzero, got {delta_x!r}")
    rate = lambda_rate(bath, constants=constants)
    if rate == 0:
        raise NoDecoherenceError(f"Localization rate is zero (n={bath.n!r} m^-3): no collisional decoherence")
    return 1.0 / (rate * delta_x * delta_x)


def collisional_visibility(t: Union[float, np.ndarray], t_coll: float) -> Union[float, np.ndarray]:
    """exp(-t / t_Coll), normalized to unit coherence at t = 0."""
    if not t_coll > 0:
        raise NumericDomainError(f"t_Coll must be > 0 s, got {t_coll!r}")
    times = np.asarray(t, dtype=float)
    if np.any(times < 0):
        raise NumericDomainError("Times must be >= 0 s")
    values = np.exp(-times / t_coll)
    return float(values) if np.ndim(t) == 0 else values


def crossover_density(
    N: int,
    geom: SuperpositionGeometry,
    sigma: float,
    m: float,
    T: float,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """
    Scatterer density [m^-3] at which t_Coll equals t_ND for a body in equilibrium
    with the bath (per-subsystem spread k_B T):

        n = 3 (N pi)^(1/2) / 16 * hbar g / (c^2 |dx| sigma (m k_B T)^(1/2))

    Below it gravitational dephasing is the faster process.
    """
    N = check_subsystem_count(N)
    _require_positive(sigma=sigma, m=m, T=T, g=abs(geom.g), delta_x=abs(geom.delta_x))
    prefactor = 3.0 * math.sqrt(N * math.pi) / 16.0
    momentum = math.sqrt(m * thermal_energy(T, constants))
    return prefactor * (constants.hbar * abs(geom.g) / constants.c2) / (abs(geom.delta_x) * sigma * momentum)


def matching_density(
    t_target: float,
    bath: CollisionalBath,
    delta_x: float,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Density [m^-3] at which the bath's t_Coll equals `t_target`; t_Coll scales as 1/n."""
    _require_positive(t_target=t_target)
    per_density = lambda_rate(bath.with_density(1.0), constants=constants) * delta_x * delta_x
    return 1.0 / (per_density * t_target)


def compare_timescales(
    N: int,
    geom: SuperpositionGeometry,
    delta_E_single: Optional[float],
    bath: CollisionalBath,
    *,
    equilibrium: bool = False,
    constants: PhysicalConstants = CODATA,
) -> CrossoverReport:
    """
    Gravitational vs collisional timescales of one superposition.

    With `equilibrium=True` the per-subsystem spread is k_B T of the bath and the
    crossover density is the closed form of `crossover_density`; otherwise the
    caller's spread is used and the crossover is the density matching t_ND.
    gravitational_dominates is the strict comparison bath.n < n_crossover, so the
    boundary itself counts as collision-dominated.
    """
    if equilibrium:
        delta_E_single = thermal_energy(bath.T, constants)
    if delta_E_single is None:
        raise NumericDomainError("A per-subsystem energy spread is required outside equilibrium mode")

    t_ND = n_subsystem_dephasing_time(delta_E_single, N, geom, constants=constants)
    try:
        t_Coll = collisional_time(bath, geom.delta_x, constants=constants)
    except NoDecoherenceError as e:
        t_Coll = e.timescale

    if equilibrium:
        n_cross = crossover_density(N, geom, bath.sigma, bath.m_scatterer, bath.T, constants=constants)
    else:
        n_cross = matching_density(t_ND, bath, geom.delta_x, constants=constants)

    report = CrossoverReport(
        t_ND=t_ND,
        t_Coll=t_Coll,
        n_crossover=n_cross,
        gravitational_dominates=bath.n < n_cross,
    )
    logger.info(
        "t_ND=%.3e s t_Coll=%.3e s n_crossover=%.3e cm^-3 gravitational_dominates=%s",
        report.t_ND,
        report.t_Coll,
        report.n_crossover_per_cm3,
        report.gravitational_dominates,
    )
    return report


def atmospheric_ratio(n_crossover: float) -> float:
    """Crossover density [m^-3] as a fraction of atmospheric density."""
    return n_crossover / per_cm3_to_per_m3(ATMOSPHERIC_DENSITY_PER_CM3)
