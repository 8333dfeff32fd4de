"""Internal energy states: pure superpositions, mixtures and thermal ensembles."""

from src.spectrum.models import GroupedSpectrum, InternalSpectrum, MixtureEnsemble, SpectrumError
from src.spectrum.statistics import (
    effective_spectrum,
    energy_variance,
    group_degenerate,
    mean_energy,
    participation_number,
    purity_sum,
)
from src.spectrum.thermal import (
    geometric_energy_variance,
    thermal_oscillator_spectrum,
    thermal_variance,
    uniform_spectrum,
)

__all__ = [
    "GroupedSpectrum",
    "InternalSpectrum",
    "MixtureEnsemble",
    "SpectrumError",
    "effective_spectrum",
    "energy_variance",
    "geometric_energy_variance",
    "group_degenerate",
    "mean_energy",
    "participation_number",
    "purity_sum",
    "thermal_oscillator_spectrum",
    "thermal_variance",
    "uniform_spectrum",
]
