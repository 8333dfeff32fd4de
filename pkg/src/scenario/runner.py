from __future__ import annotations

import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Optional, TextIO, Union

import numpy as np

from src.collisional.model import (
    ATMOSPHERIC_DENSITY_PER_CM3,
    atmospheric_ratio,
    compare_timescales,
    crossover_density,
)
from src.dephasing.models import DephasingReport, VisibilityTrace
from src.dephasing.timescales import (
    average_tolerance,
    beat_periods,
    build_report,
    is_near_commensurate,
    time_average_analytic,
    time_average_numeric,
)
from src.dephasing.traces import trace
from src.scenario.schema import BUILTIN_PREFIX, Scenario, load_scenario
from src.spectrum.statistics import group_degenerate
from src.spectrum.thermal import uniform_spectrum
from src.units.constants import CODATA, per_m3_to_per_cm3, thermal_energy
from src.utils.env import default_grid_count
from src.utils.errors import ScenarioValidationError
from src.validation.checks import run_all_checks


logger = logging.getLogger(__name__)

Output = Union[str, Path, TextIO, None]

# 17 significant digits: lossless for binary64.
CSV_FLOAT_FORMAT = "%.16e"

PAPER_TARGET_PER_CM3 = 1.2e-5
PAPER_TOLERANCE = 0.01
CODATA_TOLERANCE = 0.03
ATMOSPHERIC_TARGET_LOG10 = -24.0


class _Sink:
    """Text destination: a path, an open stream, or stdout."""

    def __init__(self, out: Output) -> None:
        self._out = out
        self._handle: Optional[TextIO] = None

    def __enter__(self) -> TextIO:
        if self._out is None:
            return sys.stdout
        if isinstance(self._out, (str, Path)):
            path = Path(self._out)
            path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = path.open("w", encoding="utf-8", newline="")
            return self._handle
        return self._out

    def __exit__(self, *exc: object) -> None:
        if self._handle is not None:
            self._handle.close()


def emit_json(payload: dict[str, Any], out: Output = None) -> None:
    with _Sink(out) as fh:
        fh.write(json.dumps(payload, indent=2, allow_nan=False))
        fh.write("\n")


def render_density_per_cm3(n_per_cm3: float) -> str:
    """Two significant digits, e.g. '1.2e-5 cm^-3'."""
    return f"{np.format_float_scientific(n_per_cm3, precision=1, exp_digits=1)} cm^-3"


def default_times(s: Scenario, count: Optional[int] = None) -> np.ndarray:
    """Logarithmic grid from t_ND/100 to 100 t_ND, covering the Gaussian decay and the plateau."""
    report = build_report(s.grouped(), s.geometry, s.subsystems, s.delta_e(), constants=s.constants)
    if not math.isfinite(report.t_ND):
        raise ScenarioValidationError(
            "grid: scenario has no dephasing (Delta E = 0 or delta_x = 0); give an explicit grid"
        )
    return np.geomspace(report.t_ND / 100.0, report.t_ND * 100.0, count or default_grid_count())


def scenario_times(s: Scenario) -> np.ndarray:
    return s.grid.times() if s.grid is not None else default_times(s)


def compute_trace(s: Scenario) -> VisibilityTrace:
    return trace(s.grouped(), s.geometry, scenario_times(s), n_subsystems=s.subsystems, constants=s.constants)


def run_trace(s: Scenario, out: Output = None) -> VisibilityTrace:
    """Write the visibility trace of a scenario as CSV, one row per grid point."""
    result = compute_trace(s)
    frame = result.to_frame()
    with _Sink(out) as fh:
        frame.to_csv(fh, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.info("Wrote trace for %r: %d rows (t_D=%.3e s, N=%d)", s.name, len(frame), result.t_D, s.subsystems)
    return result


def compute_report(s: Scenario) -> tuple[dict[str, Any], DephasingReport]:
    g_spec = s.grouped()
    dephasing = build_report(g_spec, s.geometry, s.subsystems, s.delta_e(), constants=s.constants)
    payload = dephasing.to_dict()
    if s.subsystems > 1:
        payload["assumption"] = "independent-subsystems"
    if s.bath is not None:
        crossover = compare_timescales(
            s.subsystems,
            s.geometry,
            None if s.equilibrium else s.delta_e(),
            s.bath,
            equilibrium=s.equilibrium,
            constants=s.constants,
        )
        payload.update(crossover.to_dict())
        payload["n_crossover_rendering"] = render_density_per_cm3(crossover.n_crossover_per_cm3)
    return payload, dephasing


def run_report(s: Scenario, out: Output = None) -> tuple[dict[str, Any], list[str]]:
    """
    Emit the timescale / bound report of a scenario as JSON.

    Returns the payload and the invariant-check issues; the caller decides the exit status.
    """
    payload, dephasing = compute_report(s)
    issues = run_all_checks(s)
    emit_json(payload, out)
    logger.info(
        "Report for %r: t_D=%s t_ND=%s purity=%.6g issues=%d",
        s.name,
        payload["t_d_s"],
        payload["t_nd_s"],
        dephasing.purity_sum,
        len(issues),
    )
    return payload, issues


def compute_paper_repro() -> dict[str, Any]:
    s = load_scenario(f"{BUILTIN_PREFIX}paper-repro")
    geom, bath, N = s.geometry, s.require_bath(), s.subsystems

    crossover = compare_timescales(N, geom, None, bath, equilibrium=True, constants=s.constants)
    n_cm3 = crossover.n_crossover_per_cm3
    relative_error = abs(n_cm3 - PAPER_TARGET_PER_CM3) / PAPER_TARGET_PER_CM3

    # Same inputs with exact constants: separates formula errors from rounding of the inputs.
    codata_s = load_scenario(f"{BUILTIN_PREFIX}paper-repro", constants_mode="codata")
    codata_bath = codata_s.require_bath()
    codata_n_cm3 = per_m3_to_per_cm3(
        crossover_density(
            N,
            codata_s.geometry,
            codata_bath.sigma,
            codata_bath.m_scatterer,
            codata_bath.T,
            constants=CODATA,
        )
    )
    codata_drift = abs(codata_n_cm3 - PAPER_TARGET_PER_CM3) / PAPER_TARGET_PER_CM3

    ratio = atmospheric_ratio(crossover.n_crossover)
    bound = build_report(group_degenerate(uniform_spectrum(3, 1.0)), geom, N, constants=s.constants)

    return {
        "constants": s.constants.mode,
        "subsystems": N,
        "kt_joule": thermal_energy(bath.T, s.constants),
        "t_nd_s": crossover.t_ND,
        "t_coll_s_atmospheric": crossover.t_Coll,
        "n_crossover_per_m3": crossover.n_crossover,
        "n_crossover_per_cm3": n_cm3,
        "n_crossover_rendering": render_density_per_cm3(n_cm3),
        "target_per_cm3": PAPER_TARGET_PER_CM3,
        "relative_error": relative_error,
        "passed": relative_error <= PAPER_TOLERANCE,
        "n_crossover_codata_per_cm3": codata_n_cm3,
        "codata_drift": codata_drift,
        "codata_passed": codata_drift <= CODATA_TOLERANCE,
        "atmospheric_density_per_cm3": ATMOSPHERIC_DENSITY_PER_CM3,
        "atmospheric_ratio": ratio,
        "atmospheric_ratio_passed": abs(math.log10(ratio) - ATMOSPHERIC_TARGET_LOG10) <= 1.0,
        "lower_bound_log": bound.lower_bound_log,
        "lower_bound_log10": bound.lower_bound_log / math.log(10.0),
    }


def run_paper_repro(out: Output = None) -> dict[str, Any]:
    """Reproduce the nitrogen-bath crossover estimate with its own rounded constants."""
    payload = compute_paper_repro()
    emit_json(payload, out)
    logger.info(
        "paper-repro: n_crossover=%s (target %.1e cm^-3, error %.2f%%) passed=%s",
        payload["n_crossover_rendering"],
        PAPER_TARGET_PER_CM3,
        100.0 * payload["relative_error"],
        payload["passed"],
    )
    return payload


def compute_average(s: Scenario, window_periods: float, samples: int) -> dict[str, Any]:
    g_spec = s.grouped()
    analytic = time_average_analytic(g_spec)
    _, slowest = beat_periods(g_spec, s.geometry, constants=s.constants)
    if math.isfinite(slowest):
        window: Optional[float] = window_periods * slowest
        numeric = time_average_numeric(g_spec, s.geometry, window, samples, constants=s.constants)
    else:
        # No beat at all: V(t) == 1.
        window, numeric = None, 1.0
    tolerance = average_tolerance(g_spec)
    return {
        "window_s": window,
        "window_periods": window_periods,
        "analytic": analytic,
        "numeric": numeric,
        "relative_difference": abs(numeric - analytic) / analytic,
        "near_commensurate": is_near_commensurate(g_spec),
        "tolerance": tolerance,
        "passed": abs(numeric - analytic) <= tolerance * analytic,
    }


def run_average(s: Scenario, window_periods: float, samples: int, out: Output = None) -> dict[str, Any]:
    """Numeric long-time mean of V^2 next to its analytic value sum_n w_n^2."""
    payload = compute_average(s, window_periods, samples)
    emit_json(payload, out)
    logger.info(
        "Average for %r: numeric=%.6g analytic=%.6g passed=%s",
        s.name,
        payload["numeric"],
        payload["analytic"],
        payload["passed"],
    )
    return payload
