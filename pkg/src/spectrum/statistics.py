from __future__ import annotations

import logging
import math
from typing import Literal, Optional, Union

import numpy as np

from src.spectrum.models import GroupedSpectrum, InternalSpectrum, MixtureEnsemble, SpectrumError, WeightedLevels


logger = logging.getLogger(__name__)

Centering = Literal["grand", "component"]


def mean_energy(s: WeightedLevels) -> float:
    """Weighted mean energy sum_n w_n E_n [J]."""
    return float(np.dot(s.weight_array(), s.energy_array()))


def centered_energies(s: WeightedLevels) -> np.ndarray:
    """Offsets E_n - E_bar; their weighted sum vanishes."""
    return s.energy_array() - mean_energy(s)


def _spectrum_variance(s: WeightedLevels) -> float:
    dev = centered_energies(s)
    return float(np.dot(s.weight_array(), dev * dev))


def _mixture_variance(m: MixtureEnsemble, centering: Centering) -> float:
    if centering == "grand":
        grand = math.fsum(p * mean_energy(s) for p, s in m.components)
        return math.fsum(
            p * float(np.dot(s.weight_array(), (s.energy_array() - grand) ** 2)) for p, s in m.components
        )
    if centering == "component":
        return math.fsum(p * _spectrum_variance(s) for p, s in m.components)
    raise SpectrumError(f"Unknown centering {centering!r}; expected 'grand' or 'component'")


def energy_variance(
    x: Union[WeightedLevels, MixtureEnsemble],
    *,
    centering: Centering = "grand",
) -> float:
    """
    Energy spread Delta E [J] (a standard deviation, not a variance).

    For a mixture, `centering="grand"` measures deviations from the grand mean
    sum_a p_a E_bar_a, which makes Delta E the spread of the effective weight
    distribution. `centering="component"` centers every component on its own
    mean and so drops the between-component spread.
    """
    if isinstance(x, MixtureEnsemble):
        var = _mixture_variance(x, centering)
    else:
        var = _spectrum_variance(x)
    return math.sqrt(max(var, 0.0))


def purity_sum(g: WeightedLevels) -> float:
    """sum_n w_n^2 over the (grouped) levels; lies in (0, 1]."""
    w = g.weight_array()
    return float(np.dot(w, w))


def participation_number(g: WeightedLevels) -> float:
    """Effective number of occupied levels, 1 / sum_n w_n^2."""
    return 1.0 / purity_sum(g)


def default_tolerance(s: WeightedLevels) -> float:
    return 1e-12 * (float(np.max(np.abs(s.energy_array()))) + energy_variance(s))


def group_degenerate(s: WeightedLevels, tol: Optional[float] = None) -> GroupedSpectrum:
    """
    Merge (near-)degenerate levels.

    Single-linkage scan over energy-sorted levels: a level joins the current
    cluster when it lies within `tol` of the previous level. Each cluster is
    represented by its weight-weighted mean energy and carries the summed weight.
    """
    if tol is None:
        tol = default_tolerance(s)
    if tol < 0:
        raise SpectrumError(f"Grouping tolerance must be >= 0, got {tol!r}")

    energies = s.energy_array()
    weights = s.weight_array()
    order = np.argsort(energies, kind="stable")
    energies = energies[order]
    weights = weights[order]

    # A new cluster starts wherever the gap to the previous level exceeds tol.
    starts = np.flatnonzero(np.concatenate(([True], np.diff(energies) > tol)))
    group_weights = np.add.reduceat(weights, starts)
    weighted = np.add.reduceat(weights * energies, starts)
    sizes = np.diff(np.append(starts, len(energies)))

    group_energies = np.empty(len(starts))
    for i, (start, size) in enumerate(zip(starts, sizes)):
        if group_weights[i] > 0:
            group_energies[i] = weighted[i] / group_weights[i]
        else:
            group_energies[i] = float(np.mean(energies[start : start + size]))

    if len(starts) < len(energies):
        logger.debug("Grouped %d levels into %d (tol=%g J)", len(energies), len(starts), tol)

    total = float(np.sum(group_weights))
    return GroupedSpectrum(tuple(group_energies), tuple(group_weights / total), tolerance=tol)


def effective_spectrum(m: MixtureEnsemble, tol: Optional[float] = None) -> GroupedSpectrum:
    """
    Single grouped spectrum whose weights are sum_a p_a |c_n^a|^2.

    The off-diagonal element is linear in the weights, so a mixture dephases
    exactly like this effective pure-weight spectrum.
    """
    energies: list[float] = []
    weights: list[float] = []
    for p, s in m.components:
        energies.extend(s.energies)
        weights.extend(p * w for w in s.weights)
    total = math.fsum(weights)
    merged = InternalSpectrum(tuple(energies), tuple(w / total for w in weights))
    return group_degenerate(merged, tol)
