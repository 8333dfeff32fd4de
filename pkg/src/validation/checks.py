from __future__ import annotations

import math
from typing import TYPE_CHECKING, Iterable, Optional

import numpy as np

from src.collisional.model import CollisionalBath, collisional_time, crossover_density
from src.dephasing.models import SuperpositionGeometry, VisibilityTrace
from src.dephasing.timescales import n_subsystem_dephasing_time
from src.dephasing.visibility import reversed_field_roundtrip
from src.spectrum.models import NORMALIZATION_TOL, WeightedLevels
from src.spectrum.statistics import purity_sum
from src.units.constants import CODATA, PhysicalConstants, thermal_energy
from src.utils.errors import NoDecoherenceError, NoDephasingError

if TYPE_CHECKING:
    from src.scenario.schema import Scenario


def check_normalization(g_spec: WeightedLevels, *, tol: float = NORMALIZATION_TOL) -> list[str]:
    total = math.fsum(g_spec.weights)
    if abs(total - 1.0) > tol:
        return [f"Weights not normalized: sum={total!r} tol={tol}"]
    return []


def check_visibility_bounds(result: VisibilityTrace) -> list[str]:
    errs: list[str] = []
    columns = [("visibility", result.visibility), ("small_time_approx", result.small_time_approx)]
    if result.visibility_n is not None:
        columns.append(("visibility_N", result.visibility_n))
    for name, values in columns:
        bad = np.flatnonzero((values < 0) | (values > 1) | ~np.isfinite(values))
        for i in bad[:10]:
            errs.append(f"{name} out of [0, 1]: t={result.times[i]!r} s value={values[i]!r}")
    if len(result.times) and result.times[0] == 0 and abs(result.visibility[0] - 1.0) > 1e-12:
        errs.append(f"V(0) must be 1, got {result.visibility[0]!r}")
    return errs


def check_purity_floor(g_spec: WeightedLevels) -> list[str]:
    """sum_n w_n^2 >= 1/L for L distinct levels."""
    purity = purity_sum(g_spec)
    floor = 1.0 / len(g_spec)
    if purity < floor * (1.0 - 1e-12):
        return [f"Purity sum below 1/L: purity={purity!r} L={len(g_spec)}"]
    if purity > 1.0 + 1e-12:
        return [f"Purity sum above 1: purity={purity!r}"]
    return []


def check_reversibility(
    g_spec: WeightedLevels,
    geom: SuperpositionGeometry,
    times: Iterable[float],
    *,
    tol: float = 1e-12,
    constants: PhysicalConstants = CODATA,
) -> list[str]:
    t = np.asarray(list(times), dtype=float)
    values = np.atleast_1d(reversed_field_roundtrip(g_spec, geom, t, constants=constants))
    bad = np.flatnonzero(np.abs(values - 1.0) > tol)
    return [f"Reversed-field roundtrip not 1: t={t[i]!r} s V={values[i]!r}" for i in bad[:10]]


def check_crossover_identity(
    N: int,
    geom: SuperpositionGeometry,
    bath: CollisionalBath,
    *,
    rtol: float = 1e-10,
    constants: PhysicalConstants = CODATA,
) -> list[str]:
    """At the closed-form crossover density, t_Coll must equal t_ND with Delta E = k_B T."""
    n_cross = crossover_density(N, geom, bath.sigma, bath.m_scatterer, bath.T, constants=constants)
    try:
        t_coll = collisional_time(bath.with_density(n_cross), geom.delta_x, constants=constants)
        t_nd = n_subsystem_dephasing_time(thermal_energy(bath.T, constants), N, geom, constants=constants)
    except (NoDecoherenceError, NoDephasingError) as e:
        return [f"Crossover identity not evaluable: {e}"]
    rel = abs(t_coll - t_nd) / t_nd
    if rel > rtol:
        return [f"Crossover identity violated: t_Coll={t_coll!r} s t_ND={t_nd!r} s rel={rel:.3e} rtol={rtol}"]
    return []


def run_all_checks(s: "Scenario", result: Optional[VisibilityTrace] = None) -> list[str]:
    errors: list[str] = []
    g_spec = s.grouped()

    errors.extend(check_normalization(g_spec))
    errors.extend(check_purity_floor(g_spec))

    sample_times = result.times if result is not None else s.grid.times() if s.grid is not None else [0.0]
    errors.extend(check_reversibility(g_spec, s.geometry, sample_times, constants=s.constants))

    if result is not None:
        errors.extend(check_visibility_bounds(result))

    if s.bath is not None and s.geometry.delta_x != 0 and s.geometry.g != 0:
        errors.extend(check_crossover_identity(s.subsystems, s.geometry, s.bath, constants=s.constants))
    return errors
