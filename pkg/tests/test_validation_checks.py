import numpy as np
import pytest

from src.collisional.model import CollisionalBath
from src.dephasing.models import SuperpositionGeometry, VisibilityTrace
from src.dephasing.traces import trace
from src.scenario.schema import BUILTIN_SCENARIOS, load_scenario
from src.spectrum.models import InternalSpectrum
from src.spectrum.statistics import group_degenerate
from src.validation.checks import (
    check_crossover_identity,
    check_normalization,
    check_purity_floor,
    check_reversibility,
    check_visibility_bounds,
    run_all_checks,
)


@pytest.mark.parametrize("name", sorted(BUILTIN_SCENARIOS))
def test_builtin_scenarios_pass_all_checks(name):
    s = load_scenario(f"builtin:{name}")
    assert run_all_checks(s) == []


def test_checks_pass_on_a_real_trace():
    s = load_scenario("builtin:two-level")
    result = trace(s.grouped(), s.geometry, s.grid.times(), n_subsystems=3, constants=s.constants)
    assert check_visibility_bounds(result) == []
    assert run_all_checks(s, result) == []


def test_visibility_bounds_flags_out_of_range_values():
    bad = VisibilityTrace(
        times=np.array([0.0, 1.0, 2.0]),
        visibility=np.array([0.9, 1.2, np.nan]),
        small_time_approx=np.array([1.0, 0.5, -0.1]),
        t_D=10.0,
    )
    errors = check_visibility_bounds(bad)
    assert len(errors) == 4
    assert any("V(0)" in e for e in errors)
    assert any("small_time_approx" in e for e in errors)


def test_spectrum_checks():
    g_spec = group_degenerate(InternalSpectrum((0.0, 1.0, 2.0), (0.5, 0.3, 0.2)))
    assert check_normalization(g_spec) == []
    assert check_purity_floor(g_spec) == []
    geom = SuperpositionGeometry(g=9.81, delta_x=1e-6)
    assert check_reversibility(g_spec, geom, np.linspace(0.0, 1e20, 5)) == []


def test_crossover_identity_check():
    bath = CollisionalBath(n=1.0, sigma=1e-18, m_scatterer=2.5e-26, T=300.0)
    assert check_crossover_identity(1000, SuperpositionGeometry(g=9.81, delta_x=1e-9), bath) == []
