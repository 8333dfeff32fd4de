from __future__ import annotations

import logging

import numpy as np

from src.dephasing.models import SuperpositionGeometry, VisibilityTrace
from src.dephasing.timescales import dephasing_time
from src.dephasing.visibility import (
    TimeLike,
    check_subsystem_count,
    compose_independent,
    small_time_visibility,
    visibility,
)
from src.spectrum.models import WeightedLevels
from src.spectrum.statistics import energy_variance
from src.units.constants import CODATA, PhysicalConstants
from src.utils.errors import NoDephasingError, ValidationError


logger = logging.getLogger(__name__)


def validate_grid(t_grid: TimeLike) -> np.ndarray:
    times = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if times.size == 0:
        raise ValidationError("Time grid is empty")
    if not np.all(np.isfinite(times)) or np.any(times < 0):
        raise ValidationError("Time grid values must be finite and >= 0 s")
    if np.any(np.diff(times) <= 0):
        raise ValidationError("Time grid must be strictly increasing")
    return times


def trace(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    t_grid: TimeLike,
    *,
    n_subsystems: int = 1,
    constants: PhysicalConstants = CODATA,
) -> VisibilityTrace:
    """
    Exact visibility, its small-time approximation and (for N > 1) V^N on a grid.

    Grid points are independent; evaluation is vectorized over the whole grid.
    """
    times = validate_grid(t_grid)
    n_subsystems = check_subsystem_count(n_subsystems)
    try:
        t_D = dephasing_time(energy_variance(g_spec), geom, constants=constants)
    except NoDephasingError as e:
        t_D = e.timescale

    exact = np.asarray(visibility(g_spec, geom, times, constants=constants))
    approx = np.asarray(small_time_visibility(times, t_D))
    composed = None
    if n_subsystems > 1:
        composed = np.asarray(compose_independent(lambda _t: exact, n_subsystems)(times))

    logger.debug("Traced %d grid points (t_D=%g s, N=%d)", len(times), t_D, n_subsystems)
    return VisibilityTrace(
        times=times,
        visibility=exact,
        small_time_approx=approx,
        t_D=t_D,
        n_subsystems=n_subsystems,
        visibility_n=composed,
    )
