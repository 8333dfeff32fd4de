from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from src.dephasing.models import DephasingReport, SuperpositionGeometry
from src.dephasing.visibility import check_subsystem_count, coherence_sum, phase_rates
from src.spectrum.models import WeightedLevels
from src.spectrum.statistics import centered_energies, energy_variance, purity_sum
from src.units.constants import CODATA, PhysicalConstants
from src.utils.errors import NoDephasingError, NumericDomainError, ValidationError


logger = logging.getLogger(__name__)

MIN_WINDOW_PERIODS = 10
SAMPLES_PER_FAST_PERIOD = 20
# Upper bound on time samples x levels held in memory per quadrature chunk.
_CHUNK_ELEMENTS = 1 << 20

ERGODIC_TOLERANCE = 0.02
COMMENSURATE_TOLERANCE = 0.05


def dephasing_time(
    delta_E: float,
    geom: SuperpositionGeometry,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """t_D = sqrt(2) hbar c^2 / (g Delta E |dx|) [s]."""
    if not (delta_E >= 0 and math.isfinite(delta_E)):
        raise NumericDomainError(f"Energy spread must be finite and >= 0 J, got {delta_E!r}")
    if delta_E == 0 or geom.delta_x == 0 or geom.g == 0:
        raise NoDephasingError(
            f"No dephasing: Delta E={delta_E!r} J, delta_x={geom.delta_x!r} m, g={geom.g!r} m/s^2"
        )
    # Rate factors first; see the note in src.dephasing.visibility.
    rate = (delta_E / constants.hbar) * (abs(geom.g * geom.delta_x) / constants.c2)
    return math.sqrt(2.0) / rate


def n_subsystem_dephasing_time(
    delta_E_single: float,
    N: int,
    geom: SuperpositionGeometry,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """t_ND = t_D / sqrt(N): N independent subsystems each with spread `delta_E_single`."""
    N = check_subsystem_count(N)
    return dephasing_time(delta_E_single, geom, constants=constants) / math.sqrt(N)


def beat_periods(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    *,
    constants: PhysicalConstants = CODATA,
) -> tuple[float, float]:
    """
    (fastest, slowest) beat periods 2 pi hbar c^2 / (g |dx| gap) [s].

    The fastest beat comes from the widest level pair, the slowest from the
    narrowest adjacent gap. A single level has no beat: both are infinite.
    """
    energies = np.sort(g_spec.energy_array())
    if len(energies) < 2:
        return math.inf, math.inf
    gaps = np.diff(energies)
    coupling = abs(geom.g * geom.delta_x) / constants.c2
    if coupling == 0:
        return math.inf, math.inf
    widest = (energies[-1] - energies[0]) / constants.hbar * coupling
    narrowest = float(np.min(gaps)) / constants.hbar * coupling
    slowest = 2.0 * math.pi / narrowest if narrowest > 0 else math.inf
    return 2.0 * math.pi / widest, slowest


def is_near_commensurate(
    g_spec: WeightedLevels,
    *,
    max_denominator: int = 12,
    rtol: float = 1e-3,
) -> bool:
    """True when some gap ratio sits within `rtol` of a fraction p/q with q <= max_denominator."""
    gaps = np.diff(np.sort(g_spec.energy_array()))
    gaps = gaps[gaps > 0]
    if len(gaps) < 2:
        return False
    base_index = int(np.argmin(gaps))
    base = float(gaps[base_index])
    for i, gap in enumerate(gaps):
        if i == base_index:
            continue
        ratio = float(gap) / base
        nearest = Fraction(ratio).limit_denominator(max_denominator)
        if abs(ratio - float(nearest)) <= rtol * ratio:
            return True
    return False


def average_tolerance(g_spec: WeightedLevels) -> float:
    return COMMENSURATE_TOLERANCE if is_near_commensurate(g_spec) else ERGODIC_TOLERANCE


def time_average_analytic(g_spec: WeightedLevels) -> float:
    """Long-time mean of V(t)^2, which is sum_n w_n^2 over distinct energies."""
    return purity_sum(g_spec)


def time_average_numeric(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    window: float,
    samples: int,
    *,
    constants: PhysicalConstants = CODATA,
) -> float:
    """
    (1/window) * integral_0^window V(t)^2 dt by the composite trapezoid rule.

    The grid is uniform. `samples` is raised when needed so that the fastest
    beat gets at least SAMPLES_PER_FAST_PERIOD points. Converges to
    sum_n w_n^2 + O(1/window) for incommensurate gaps.
    """
    if not (window > 0 and math.isfinite(window)):
        raise NumericDomainError(f"Averaging window must be > 0 s, got {window!r}")
    if int(samples) != samples or samples < 2:
        raise NumericDomainError(f"Sample count must be an integer >= 2, got {samples!r}")

    fastest, slowest = beat_periods(g_spec, geom, constants=constants)
    if not math.isfinite(slowest):
        # No beat: V(t) stays at 1.
        return 1.0
    if window < MIN_WINDOW_PERIODS * slowest:
        raise ValidationError(
            f"Averaging window {window:g} s is shorter than {MIN_WINDOW_PERIODS} slowest beat periods "
            f"({MIN_WINDOW_PERIODS * slowest:g} s)"
        )

    required = math.ceil(SAMPLES_PER_FAST_PERIOD * window / fastest) + 1
    count = max(int(samples), required)
    if count > samples:
        logger.debug("Raised quadrature samples %d -> %d to resolve the fastest beat", samples, count)

    weights = g_spec.weight_array()
    norm = float(weights.sum()) ** 2
    rates = phase_rates(centered_energies(g_spec), geom, constants)
    step = window / (count - 1)

    # Chunks share their end points, so the pieces add up to the full composite rule.
    rows = max(1, _CHUNK_ELEMENTS // len(rates))
    integral = 0.0
    for start in range(0, count - 1, rows):
        stop = min(start + rows, count - 1)
        t = np.arange(start, stop + 1, dtype=float) * step
        c = coherence_sum(weights, np.multiply.outer(t, rates))
        integral += float(trapezoid((c.real * c.real + c.imag * c.imag) / norm, t))
    return integral / window


def lower_bound_log(g_spec: WeightedLevels, N: int) -> float:
    """Natural log of (sum_n w_n^2)^N, the floor on the long-time mean of V_N^2."""
    N = check_subsystem_count(N)
    return min(0.0, N * math.log(purity_sum(g_spec)))


def build_report(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    n_subsystems: int = 1,
    delta_E: Optional[float] = None,
    *,
    constants: PhysicalConstants = CODATA,
) -> DephasingReport:
    """Timescales and long-time bounds of one scenario; infinite timescales stay infinite."""
    n_subsystems = check_subsystem_count(n_subsystems)
    spread = energy_variance(g_spec) if delta_E is None else delta_E
    try:
        t_D = dephasing_time(spread, geom, constants=constants)
        t_ND = n_subsystem_dephasing_time(spread, n_subsystems, geom, constants=constants)
    except NoDephasingError as e:
        t_D = t_ND = e.timescale
    return DephasingReport(
        t_D=t_D,
        t_ND=t_ND,
        purity_sum=purity_sum(g_spec),
        lower_bound_log=lower_bound_log(g_spec, n_subsystems),
        n_subsystems=n_subsystems,
        delta_E=spread,
    )
