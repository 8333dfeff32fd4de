"""
Visibility of a two-path superposition whose internal levels pick up
height-dependent phases.

Phases are formed as (E / hbar) * (g dx / c^2) * t with the two rate factors
computed first: E / hbar is ~1e15 1/s while g dx / c^2 is ~1e-25, and the
naive ordering loses the gravitational factor.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Union

import numpy as np

from src.dephasing.models import SuperpositionGeometry
from src.spectrum.models import WeightedLevels
from src.spectrum.statistics import centered_energies
from src.units.constants import CODATA, PhysicalConstants
from src.utils.errors import NumericDomainError


TimeLike = Union[float, Sequence[float], np.ndarray]
VisibilityFn = Callable[[TimeLike], Union[float, np.ndarray]]


def _as_output(values: np.ndarray, t: TimeLike) -> Union[float, np.ndarray]:
    return float(values) if np.ndim(t) == 0 else values


def phase_rates(energies: np.ndarray, geom: SuperpositionGeometry, constants: PhysicalConstants) -> np.ndarray:
    """d(phase)/dt of each level for a path separation delta_x [rad/s]."""
    coupling = geom.g * geom.delta_x / constants.c2
    return (energies / constants.hbar) * coupling


def coherence_sum(weights: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """sum_n w_n exp(-i phase_n) along the last axis."""
    return np.exp(-1j * phases) @ weights


def _modulus(weights: np.ndarray, phases: np.ndarray) -> np.ndarray:
    # Dividing by sum(w) pins V(0) to exactly 1.
    return np.minimum(np.abs(coherence_sum(weights, phases)) / weights.sum(), 1.0)


def internal_phase(
    E_n: float,
    geom: SuperpositionGeometry,
    t: float,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Phase E_n t (1 + g x / c^2) / hbar of level n held at height reference_x [rad]."""
    return E_n / constants.hbar * t + gravitational_phase_shift(E_n, geom, t, constants=constants)


def gravitational_phase_shift(
    E_n: float,
    geom: SuperpositionGeometry,
    t: float,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Height-dependent part E_n t g x / (hbar c^2) of `internal_phase` [rad]."""
    return (E_n / constants.hbar) * (geom.g * geom.reference_x / constants.c2) * t


def offdiag_element(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    t: TimeLike,
    *,
    constants: PhysicalConstants = CODATA,
) -> Union[complex, np.ndarray]:
    """Center-of-mass coherence rho_12(t) = 1/2 sum_n w_n exp(-i E_n t g dx / hbar c^2)."""
    rates = phase_rates(g_spec.energy_array(), geom, constants)
    times = np.asarray(t, dtype=float)
    values = 0.5 * coherence_sum(g_spec.weight_array(), np.multiply.outer(times, rates))
    return complex(values) if np.ndim(t) == 0 else values


def visibility(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    t: TimeLike,
    *,
    constants: PhysicalConstants = CODATA,
) -> Union[float, np.ndarray]:
    """
    Interferometric visibility 2 |rho_12(t)| in [0, 1].

    Evaluated in the mean-centered form (phases from E_n - E_bar). The modulus is
    the same as for raw energies, but centered phases are smaller by about
    Delta E / E_bar and keep their precision.
    """
    rates = phase_rates(centered_energies(g_spec), geom, constants)
    times = np.asarray(t, dtype=float)
    values = _modulus(g_spec.weight_array(), np.multiply.outer(times, rates))
    return _as_output(values, t)


def visibility_fn(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    *,
    constants: PhysicalConstants = CODATA,
) -> VisibilityFn:
    """`visibility` with spectrum and geometry bound, as a function of time only."""
    return lambda t: visibility(g_spec, geom, t, constants=constants)


def two_level_visibility(p: float, phi: TimeLike) -> Union[float, np.ndarray]:
    """Closed form |p e^{i phi} + (1 - p)| of a two-level superposition."""
    phi_arr = np.asarray(phi, dtype=float)
    values = np.abs(p * np.exp(1j * phi_arr) + (1.0 - p))
    return _as_output(values, phi)


def small_time_visibility(t: TimeLike, t_D: float) -> Union[float, np.ndarray]:
    """Quadratic approximation 1 - t^2 / t_D^2, clamped at 0."""
    if not t_D > 0:
        raise NumericDomainError(f"t_D must be > 0 s, got {t_D!r}")
    times = np.asarray(t, dtype=float)
    if np.any(times < 0):
        raise NumericDomainError("Times must be >= 0 s")
    ratio = times / t_D
    values = np.maximum(0.0, 1.0 - ratio * ratio)
    return _as_output(values, t)


def exponential_visibility(t: TimeLike, t_D: float, N: int = 1) -> Union[float, np.ndarray]:
    """Gaussian form exp(-N t^2 / t_D^2) of N independent subsystems."""
    if not t_D > 0:
        raise NumericDomainError(f"t_D must be > 0 s, got {t_D!r}")
    ratio = np.asarray(t, dtype=float) / t_D
    values = np.exp(-N * ratio * ratio)
    return _as_output(values, t)


def strongly_coupled_small_time(t: TimeLike, t_1D: float, N: int) -> Union[float, np.ndarray]:
    """
    1 - N t^2 / t_1D^2, clamped at 0.

    For strongly coupled subsystems only this small-time form is available; no
    long-time behaviour follows from it.
    """
    return small_time_visibility(t, t_1D / math.sqrt(N))


def check_subsystem_count(N: int) -> int:
    if int(N) != N or N < 1:
        raise NumericDomainError(f"Subsystem count must be an integer >= 1, got {N!r}")
    return int(N)


def compose_independent(V_single: VisibilityFn, N: int) -> VisibilityFn:
    """
    Visibility of N independent identical subsystems, V_1(t)^N.

    Exact power, evaluated in log space so large N underflows cleanly to 0.
    """
    N = check_subsystem_count(N)
    if N == 1:
        return V_single

    def composed(t: TimeLike) -> Union[float, np.ndarray]:
        v = np.asarray(V_single(t), dtype=float)
        with np.errstate(divide="ignore"):
            values = np.where(v > 0, np.exp(N * np.log(np.where(v > 0, v, 1.0))), 0.0)
        return _as_output(values, t)

    return composed


def reversed_field_roundtrip(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    t: TimeLike,
    *,
    constants: PhysicalConstants = CODATA,
) -> Union[float, np.ndarray]:
    """
    Visibility after time t in `geom` followed by time t in the reversed field.

    The two legs contribute opposite phases, so the result is 1.
    """
    times = np.asarray(t, dtype=float)
    if np.any(times < 0):
        raise NumericDomainError("Times must be >= 0 s")
    energies = centered_energies(g_spec)
    forward = np.multiply.outer(times, phase_rates(energies, geom, constants))
    backward = np.multiply.outer(times, phase_rates(energies, geom.reversed(), constants))
    values = _modulus(g_spec.weight_array(), forward + backward)
    return _as_output(values, t)
