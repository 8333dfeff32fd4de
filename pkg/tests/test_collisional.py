import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.collisional import (
    ATMOSPHERIC_DENSITY_PER_CM3,
    CollisionalBath,
    atmospheric_ratio,
    collisional_time,
    collisional_visibility,
    compare_timescales,
    crossover_density,
    lambda_rate,
    matching_density,
    q2v_thermal,
)
from src.dephasing.models import SuperpositionGeometry
from src.dephasing.timescales import n_subsystem_dephasing_time
from src.scenario.schema import parse_scenario
from src.units.constants import (
    CODATA,
    PAPER,
    cm2_to_m2,
    cm_to_m,
    ev_to_joule,
    joule_to_ev,
    mass_ev_per_c2_to_kg,
    per_cm3_to_per_m3,
    per_m3_to_per_cm3,
    temperature_from_thermal_energy,
    thermal_energy,
)
from src.utils.errors import NoDecoherenceError, NumericDomainError


@pytest.fixture()
def cube_geom():
    return SuperpositionGeometry(g=PAPER.g_earth, delta_x=cm_to_m(1e-7))


@pytest.fixture()
def nitrogen():
    return CollisionalBath(
        n=per_cm3_to_per_m3(ATMOSPHERIC_DENSITY_PER_CM3),
        sigma=cm2_to_m2(1e-14),
        m_scatterer=mass_ev_per_c2_to_kg(14e9, PAPER),
        T=temperature_from_thermal_energy(ev_to_joule(1.0 / 39.0), PAPER),
    )


def test_q2v_thermal_formula_and_scaling(nitrogen):
    kt = thermal_energy(nitrogen.T)
    expected = 4.0 * math.sqrt(nitrogen.m_scatterer / math.pi) * (2.0 * kt) ** 1.5
    q2v = q2v_thermal(nitrogen.m_scatterer, nitrogen.T)
    assert q2v == pytest.approx(expected, rel=1e-14)
    assert q2v_thermal(4.0 * nitrogen.m_scatterer, nitrogen.T) == pytest.approx(2.0 * q2v, rel=1e-14)
    assert q2v_thermal(nitrogen.m_scatterer, 4.0 * nitrogen.T) == pytest.approx(8.0 * q2v, rel=1e-14)
    with pytest.raises(NumericDomainError):
        q2v_thermal(0.0, 300.0)


def test_lambda_rate_linear_in_density(nitrogen):
    assert lambda_rate(nitrogen.with_density(0.0)) == 0.0
    rate = lambda_rate(nitrogen)
    assert lambda_rate(nitrogen.with_density(2.0 * nitrogen.n)) == pytest.approx(2.0 * rate, rel=1e-15)


def test_collisional_time(nitrogen, cube_geom):
    rate = lambda_rate(nitrogen, constants=PAPER)
    t_coll = collisional_time(nitrogen, cube_geom.delta_x, constants=PAPER)
    assert t_coll == pytest.approx(1.0 / (rate * cube_geom.delta_x**2), rel=1e-15)
    with pytest.raises(NoDecoherenceError) as exc:
        collisional_time(nitrogen.with_density(0.0), cube_geom.delta_x)
    assert exc.value.timescale == math.inf
    with pytest.raises(NumericDomainError):
        collisional_time(nitrogen, 0.0)


def test_collisional_visibility():
    assert collisional_visibility(0.0, 3.0) == 1.0
    assert collisional_visibility(3.0, 3.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert collisional_visibility(30.0, 3.0) == pytest.approx(4.54e-5, rel=1e-3)
    values = collisional_visibility(np.linspace(0.0, 10.0, 11), 3.0)
    assert np.all(np.diff(values) < 0)
    with pytest.raises(NumericDomainError):
        collisional_visibility(1.0, 0.0)


def test_bath_validation():
    with pytest.raises(NumericDomainError):
        CollisionalBath(n=-1.0, sigma=1e-18, m_scatterer=1e-26, T=300.0)
    with pytest.raises(NumericDomainError):
        CollisionalBath(n=1.0, sigma=1e-18, m_scatterer=1e-26, T=0.0)
    assert CollisionalBath(n=0.0, sigma=1e-18, m_scatterer=1e-26, T=300.0).n == 0.0


def test_crossover_density_reproduces_nitrogen_estimate(nitrogen, cube_geom):
    n = crossover_density(1000, cube_geom, nitrogen.sigma, nitrogen.m_scatterer, nitrogen.T, constants=PAPER)
    assert per_m3_to_per_cm3(n) == pytest.approx(1.2e-5, rel=1e-2)
    ratio = atmospheric_ratio(n)
    assert abs(math.log10(ratio) - (-24.0)) <= 1.0


def test_crossover_identity_at_nitrogen_point(nitrogen, cube_geom):
    n = crossover_density(1000, cube_geom, nitrogen.sigma, nitrogen.m_scatterer, nitrogen.T, constants=PAPER)
    t_coll = collisional_time(nitrogen.with_density(n), cube_geom.delta_x, constants=PAPER)
    t_nd = n_subsystem_dephasing_time(thermal_energy(nitrogen.T, PAPER), 1000, cube_geom, constants=PAPER)
    assert t_coll == pytest.approx(t_nd, rel=1e-10)
    assert t_coll == pytest.approx(1.06e10, rel=1e-2)


def test_crossover_scalings(nitrogen, cube_geom):
    base = crossover_density(1, cube_geom, nitrogen.sigma, nitrogen.m_scatterer, nitrogen.T)
    assert crossover_density(4, cube_geom, nitrogen.sigma, nitrogen.m_scatterer, nitrogen.T) == pytest.approx(
        2.0 * base, rel=1e-14
    )
    flipped = SuperpositionGeometry(g=-cube_geom.g, delta_x=-cube_geom.delta_x)
    assert crossover_density(1, flipped, nitrogen.sigma, nitrogen.m_scatterer, nitrogen.T) == base
    with pytest.raises(NumericDomainError):
        crossover_density(1, SuperpositionGeometry(g=0.0, delta_x=1e-9), nitrogen.sigma, nitrogen.m_scatterer, 300.0)


def test_compare_timescales_dominance_and_tie_break(nitrogen, cube_geom):
    atmospheric = compare_timescales(1000, cube_geom, None, nitrogen, equilibrium=True, constants=PAPER)
    assert atmospheric.gravitational_dominates is False
    assert atmospheric.t_Coll < atmospheric.t_ND

    n_cross = atmospheric.n_crossover
    thin = compare_timescales(
        1000, cube_geom, None, nitrogen.with_density(n_cross / 2.0), equilibrium=True, constants=PAPER
    )
    assert thin.gravitational_dominates is True

    tie = compare_timescales(1000, cube_geom, None, nitrogen.with_density(n_cross), equilibrium=True, constants=PAPER)
    assert tie.t_Coll == pytest.approx(tie.t_ND, rel=1e-10)
    assert tie.gravitational_dominates is False


def test_compare_timescales_vacuum_and_explicit_spread(nitrogen, cube_geom):
    vacuum = compare_timescales(1000, cube_geom, None, nitrogen.with_density(0.0), equilibrium=True)
    assert vacuum.t_Coll == math.inf
    assert vacuum.gravitational_dominates is True
    assert vacuum.to_dict()["t_coll_s"] is None

    spread = 2.0 * thermal_energy(nitrogen.T)
    report = compare_timescales(10, cube_geom, spread, nitrogen)
    assert report.n_crossover == pytest.approx(
        matching_density(report.t_ND, nitrogen, cube_geom.delta_x), rel=1e-15
    )
    at_match = collisional_time(nitrogen.with_density(report.n_crossover), cube_geom.delta_x)
    assert at_match == pytest.approx(report.t_ND, rel=1e-12)

    with pytest.raises(NumericDomainError):
        compare_timescales(10, cube_geom, None, nitrogen)


def log_uniform(lo_exp, hi_exp):
    return st.floats(min_value=lo_exp, max_value=hi_exp).map(lambda e: 10.0**e)


baths = st.builds(
    CollisionalBath,
    n=log_uniform(10.0, 26.0),
    sigma=log_uniform(-20.0, -16.0),
    m_scatterer=log_uniform(-27.0, -24.0),
    T=log_uniform(0.0, 3.0),
)
growth = st.floats(min_value=1.01, max_value=100.0)


@given(bath=baths, delta_x=log_uniform(-10.0, -4.0), k=growth)
@settings(max_examples=500, deadline=None)
def test_collisional_time_strictly_decreases_in_each_input(bath, delta_x, k):
    base = collisional_time(bath, delta_x)
    assert collisional_time(bath.with_density(k * bath.n), delta_x) < base
    assert collisional_time(CollisionalBath(bath.n, k * bath.sigma, bath.m_scatterer, bath.T), delta_x) < base
    assert collisional_time(CollisionalBath(bath.n, bath.sigma, bath.m_scatterer, k * bath.T), delta_x) < base
    assert collisional_time(bath, math.sqrt(k) * delta_x) < base
    assert collisional_time(bath, -math.sqrt(k) * delta_x) < base


@given(
    N=st.integers(min_value=1, max_value=10**6),
    g=log_uniform(-1.0, 2.0),
    delta_x=log_uniform(-10.0, -4.0),
    sigma=log_uniform(-20.0, -16.0),
    m=log_uniform(-27.0, -24.0),
    T=log_uniform(0.0, 3.0),
    k=growth,
)
@settings(max_examples=500, deadline=None)
def test_crossover_density_monotonicity(N, g, delta_x, sigma, m, T, k):
    geom = SuperpositionGeometry(g=g, delta_x=delta_x)
    base = crossover_density(N, geom, sigma, m, T)
    assert crossover_density(N + max(1, round(k * N)), geom, sigma, m, T) > base
    assert crossover_density(N, SuperpositionGeometry(g=k * g, delta_x=delta_x), sigma, m, T) > base
    assert crossover_density(N, geom, k * sigma, m, T) < base
    assert crossover_density(N, SuperpositionGeometry(g=g, delta_x=k * delta_x), sigma, m, T) < base
    # Only the product m T enters, through sqrt(m k_B T).
    assert crossover_density(N, geom, sigma, k * m, T) < base
    assert crossover_density(N, geom, sigma, m, k * T) < base
    assert crossover_density(N, geom, sigma, k * m, T / k) == pytest.approx(base, rel=1e-12)


def _bath_document(geometry, bath, N):
    return json.dumps(
        {
            "spectrum": {"levels": [{"energy_ev": 0.0, "weight": 1.0}]},
            "geometry": geometry,
            "subsystems": N,
            "bath": {**bath, "equilibrium": True},
        }
    )


@given(
    N=st.integers(min_value=1, max_value=10**6),
    delta_x=log_uniform(-10.0, -4.0),
    n=log_uniform(10.0, 26.0),
    sigma=log_uniform(-20.0, -16.0),
    m=log_uniform(-27.0, -24.0),
    T=log_uniform(0.0, 3.0),
)
@settings(max_examples=300, deadline=None)
def test_density_ratio_is_unit_independent(N, delta_x, n, sigma, m, T):
    si = parse_scenario(
        _bath_document(
            {"g_m_s2": 9.81, "delta_x_m": delta_x},
            {"density_per_m3": n, "sigma_m2": sigma, "mass_kg": m, "temperature_k": T},
            N,
        )
    )
    ev_cm = parse_scenario(
        _bath_document(
            {"g_m_s2": 9.81, "delta_x_cm": delta_x / cm_to_m(1.0)},
            {
                "density_per_cm3": per_m3_to_per_cm3(n),
                "sigma_cm2": sigma / cm2_to_m2(1.0),
                "mass_ev_c2": joule_to_ev(m * CODATA.c2),
                "kt_ev": joule_to_ev(thermal_energy(T)),
            },
            N,
        )
    )
    ratios = []
    for s in (si, ev_cm):
        report = compare_timescales(s.subsystems, s.geometry, None, s.bath, equilibrium=True, constants=s.constants)
        ratios.append(s.bath.n / report.n_crossover)
    assert ratios[1] == pytest.approx(ratios[0], rel=1e-10)
