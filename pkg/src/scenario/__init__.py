"""Scenario documents and the runs built on them (trace, report, paper-repro, average)."""

from src.scenario.runner import (
    compute_average,
    compute_paper_repro,
    compute_report,
    compute_trace,
    render_density_per_cm3,
    run_average,
    run_paper_repro,
    run_report,
    run_trace,
)
from src.scenario.schema import (
    BUILTIN_PREFIX,
    BUILTIN_SCENARIOS,
    GridSpec,
    Scenario,
    load_scenario,
    parse_scenario,
    scenario_to_document,
)

__all__ = [
    "BUILTIN_PREFIX",
    "BUILTIN_SCENARIOS",
    "GridSpec",
    "Scenario",
    "compute_average",
    "compute_paper_repro",
    "compute_report",
    "compute_trace",
    "load_scenario",
    "parse_scenario",
    "render_density_per_cm3",
    "run_average",
    "run_paper_repro",
    "run_report",
    "run_trace",
    "scenario_to_document",
]
