"""Gravitational time-dilation dephasing: phases, visibility, timescales and bounds."""

from src.dephasing.models import DephasingReport, SuperpositionGeometry, VisibilityTrace
from src.dephasing.timescales import (
    average_tolerance,
    beat_periods,
    build_report,
    dephasing_time,
    is_near_commensurate,
    lower_bound_log,
    n_subsystem_dephasing_time,
    time_average_analytic,
    time_average_numeric,
)
from src.dephasing.traces import trace, validate_grid
from src.dephasing.visibility import (
    compose_independent,
    exponential_visibility,
    gravitational_phase_shift,
    internal_phase,
    offdiag_element,
    reversed_field_roundtrip,
    small_time_visibility,
    strongly_coupled_small_time,
    two_level_visibility,
    visibility,
    visibility_fn,
)

__all__ = [
    "DephasingReport",
    "SuperpositionGeometry",
    "VisibilityTrace",
    "average_tolerance",
    "beat_periods",
    "build_report",
    "compose_independent",
    "dephasing_time",
    "exponential_visibility",
    "gravitational_phase_shift",
    "internal_phase",
    "is_near_commensurate",
    "lower_bound_log",
    "n_subsystem_dephasing_time",
    "offdiag_element",
    "reversed_field_roundtrip",
    "small_time_visibility",
    "strongly_coupled_small_time",
    "time_average_analytic",
    "time_average_numeric",
    "trace",
    "two_level_visibility",
    "validate_grid",
    "visibility",
    "visibility_fn",
]
