"""Physical constants and the unit conversions used at the scenario boundary."""

from src.units.constants import (
    CODATA,
    PAPER,
    PhysicalConstants,
    cm2_to_m2,
    cm_to_m,
    constants_for_mode,
    ev_to_joule,
    joule_to_ev,
    mass_ev_per_c2_to_kg,
    per_cm3_to_per_m3,
    per_m3_to_per_cm3,
    temperature_from_thermal_energy,
    thermal_energy,
)

__all__ = [
    "CODATA",
    "PAPER",
    "PhysicalConstants",
    "cm2_to_m2",
    "cm_to_m",
    "constants_for_mode",
    "ev_to_joule",
    "joule_to_ev",
    "mass_ev_per_c2_to_kg",
    "per_cm3_to_per_m3",
    "per_m3_to_per_cm3",
    "temperature_from_thermal_energy",
    "thermal_energy",
]
