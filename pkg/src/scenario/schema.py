"""
Scenario documents.

A scenario is a JSON object with unit-bearing keys (`delta_x_m` or `delta_x_cm`,
`energy_ev` or `energy_joule`, ...). Everything is converted to SI on the way in;
`scenario_to_document` writes the normalized SI form back out.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Mapping, Optional, Union

import numpy as np

from src.collisional.model import CollisionalBath
from src.dephasing.models import SuperpositionGeometry
from src.spectrum.models import GroupedSpectrum, InternalSpectrum, MixtureEnsemble, SpectrumError
from src.spectrum.statistics import effective_spectrum, energy_variance, group_degenerate
from src.spectrum.thermal import thermal_oscillator_spectrum, uniform_spectrum
from src.units.constants import (
    CM_TO_M,
    MODE_CODATA,
    MODES,
    PhysicalConstants,
    constants_for_mode,
    ev_to_joule,
    mass_ev_per_c2_to_kg,
    per_cm3_to_per_m3,
    temperature_from_thermal_energy,
)
from src.utils.errors import GravDephaseError, ScenarioParseError, ScenarioValidationError


logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
SPACINGS = ("linear", "log")

_TOP_KEYS = ("name", "spectrum", "mixture", "geometry", "subsystems", "bath", "grid", "constants")


@dataclass(frozen=True)
class GridSpec:
    start_s: float
    stop_s: float
    count: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ScenarioValidationError(f"grid.count must be >= 1, got {self.count!r}")
        if not (0 <= self.start_s <= self.stop_s):
            raise ScenarioValidationError(
                f"grid needs stop_s >= start_s >= 0, got start_s={self.start_s!r} stop_s={self.stop_s!r}"
            )
        if self.count > 1 and self.stop_s == self.start_s:
            raise ScenarioValidationError("grid with count > 1 needs stop_s > start_s")
        if self.spacing not in SPACINGS:
            raise ScenarioValidationError(f"grid.spacing must be one of {SPACINGS}, got {self.spacing!r}")
        if self.spacing == "log" and self.start_s <= 0:
            raise ScenarioValidationError("grid.spacing 'log' requires start_s > 0")

    def times(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start_s])
        if self.spacing == "log":
            return np.geomspace(self.start_s, self.stop_s, self.count)
        return np.linspace(self.start_s, self.stop_s, self.count)


@dataclass(frozen=True)
class Scenario:
    geometry: SuperpositionGeometry
    constants: PhysicalConstants
    spectrum: Optional[InternalSpectrum] = None
    mixture: Optional[MixtureEnsemble] = None
    subsystems: int = 1
    bath: Optional[CollisionalBath] = None
    equilibrium: bool = False
    grid: Optional[GridSpec] = None
    name: str = "scenario"

    def __post_init__(self) -> None:
        if (self.spectrum is None) == (self.mixture is None):
            raise ScenarioValidationError("Exactly one of 'spectrum' or 'mixture' must be given")
        if self.subsystems < 1:
            raise ScenarioValidationError(f"subsystems must be >= 1, got {self.subsystems!r}")

    def source(self) -> Union[InternalSpectrum, MixtureEnsemble]:
        if self.mixture is not None:
            return self.mixture
        if self.spectrum is None:
            raise ScenarioValidationError("Exactly one of 'spectrum' or 'mixture' must be given")
        return self.spectrum

    def grouped(self) -> GroupedSpectrum:
        source = self.source()
        if isinstance(source, MixtureEnsemble):
            return effective_spectrum(source)
        return group_degenerate(source)

    def require_bath(self) -> CollisionalBath:
        if self.bath is None:
            raise ScenarioValidationError(f"Scenario {self.name!r} has no 'bath' section")
        return self.bath

    def delta_e(self) -> float:
        """Energy spread of one subsystem [J] (grand-mean centering for mixtures)."""
        return energy_variance(self.source())


_PATH_SEGMENT = re.compile(r"\[(\d+)\]|([^.\[\]]+)")


def _skip(text: str, i: int, chars: str) -> int:
    while i < len(text) and text[i] in chars:
        i += 1
    return i


def _string_end(text: str, i: int) -> int:
    """Offset just past the JSON string opening at `i`."""
    j = i + 1
    while text[j] != '"':
        j += 2 if text[j] == "\\" else 1
    return j + 1


def _value_end(text: str, i: int) -> int:
    """Offset just past the JSON value starting at `i`."""
    if text[i] == '"':
        return _string_end(text, i)
    if text[i] not in "{[":
        while i < len(text) and text[i] not in ",]} \t\r\n":
            i += 1
        return i
    depth = 0
    while True:
        ch = text[i]
        if ch == '"':
            i = _string_end(text, i)
            continue
        if ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1


def _children(text: str, start: int) -> Iterator[tuple[Union[str, int], int, int]]:
    """(key or index, offset of the key or element, offset of the value) for each direct child."""
    object_like = text[start] == "{"
    i = start + 1
    index = 0
    while True:
        i = _skip(text, i, " \t\r\n,")
        if text[i] in "}]":
            return
        if object_like:
            key_end = _string_end(text, i)
            value = _skip(text, text.index(":", key_end) + 1, " \t\r\n")
            yield json.loads(text[i:key_end]), i, value
        else:
            value = i
            yield index, i, value
            index += 1
        i = _value_end(text, value)


class _Document:
    """Raw scenario text plus helpers that point diagnostics at a line."""

    def __init__(self, text: str) -> None:
        self.text = text

    def _offset_of(self, segments: list[Union[str, int]]) -> Optional[int]:
        container = _skip(self.text, 0, " \t\r\n")
        found = None
        for segment in segments:
            if container < 0:
                return None
            for name, key_at, value_at in _children(self.text, container):
                if name == segment:
                    found, container = key_at, value_at
                    break
            else:
                return None
            if self.text[container] not in "{[":
                # A scalar can only be the last segment.
                container = -1
        return found

    def line_of(self, key: str, path: str = "scenario") -> Optional[int]:
        """Line of `key` inside the section at `path` (e.g. `spectrum.levels[2]`), or None."""
        segments: list[Union[str, int]] = [
            int(index) if index else name for index, name in _PATH_SEGMENT.findall(path)
        ]
        if segments and segments[0] == "scenario":
            segments = segments[1:]
        segments.append(int(key) if key.isdigit() else key)
        try:
            offset = self._offset_of(segments)
        except (IndexError, ValueError):
            return None
        if offset is None:
            return None
        return self.text.count("\n", 0, offset) + 1

    def where(self, key: str, path: str = "scenario") -> str:
        line = self.line_of(key, path)
        return f" (line {line})" if line is not None else ""

    def parse_error(self, path: str, key: str, message: str) -> ScenarioParseError:
        return ScenarioParseError(f"{path}.{key}: {message}{self.where(key, path)}")

    def validation_error(self, path: str, key: str, message: str) -> ScenarioValidationError:
        return ScenarioValidationError(f"{path}.{key}: {message}{self.where(key, path)}")



def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _section(doc: _Document, raw: Any, path: str, key: str) -> dict[str, Any]:
    if not isinstance(raw, dict):
        raise doc.parse_error(path, key, "expected a JSON object")
    return raw


def _check_keys(doc: _Document, section: Mapping[str, Any], path: str, allowed: tuple[str, ...]) -> None:
    for key in section:
        if key not in allowed:
            raise doc.parse_error(path, key, f"unknown key; expected one of {', '.join(allowed)}")


def _number(doc: _Document, section: Mapping[str, Any], path: str, key: str, unit: str) -> float:
    value = section[key]
    if not _is_number(value):
        raise doc.parse_error(path, key, f"expected a finite number in {unit}, got {value!r}")
    return float(value)


def _integer(doc: _Document, section: Mapping[str, Any], path: str, key: str, minimum: int) -> int:
    value = section[key]
    if not (isinstance(value, int) and not isinstance(value, bool)):
        raise doc.parse_error(path, key, f"expected an integer count, got {value!r}")
    if value < minimum:
        raise doc.validation_error(path, key, f"must be >= {minimum}, got {value!r}")
    return int(value)


def _unit_choice(
    doc: _Document,
    section: Mapping[str, Any],
    path: str,
    options: Mapping[str, tuple[str, Any]],
) -> float:
    """
    Read one quantity offered under several unit-bearing keys.

    `options` maps key -> (unit label, converter to SI). Exactly one key may be present.
    """
    present = [k for k in options if k in section]
    if len(present) > 1:
        raise doc.parse_error(
            path, present[1], f"conflicts with {present[0]!r}; give exactly one of {', '.join(options)}"
        )
    if not present:
        choices = ", ".join(f"{k} [{unit}]" for k, (unit, _) in options.items())
        raise ScenarioParseError(f"{path}: missing one of {choices}")
    key = present[0]
    unit, convert = options[key]
    value = _number(doc, section, path, key, unit)
    try:
        return float(convert(value))
    except GravDephaseError as e:
        raise doc.validation_error(path, key, str(e)) from e


def _optional_unit_choice(
    doc: _Document,
    section: Mapping[str, Any],
    path: str,
    options: Mapping[str, tuple[str, Any]],
) -> Optional[float]:
    if not any(k in section for k in options):
        return None
    return _unit_choice(doc, section, path, options)

def _parse_levels(doc: _Document, raw: Any, path: str) -> InternalSpectrum:
    if not isinstance(raw, list) or not raw:
        raise doc.parse_error(path, "levels", "expected a non-empty list of {energy_ev|energy_joule, weight}")
    energies: list[float] = []
    weights: list[float] = []
    for i, item in enumerate(raw):
        item_path = f"{path}.levels[{i}]"
        level = _section(doc, item, f"{path}.levels", str(i))
        _check_keys(doc, level, item_path, ("energy_ev", "energy_joule", "weight"))
        energy = _unit_choice(
            doc,
            level,
            item_path,
            {"energy_ev": ("eV", ev_to_joule), "energy_joule": ("J", float)},
        )
        if "weight" not in level:
            raise ScenarioParseError(f"{item_path}: missing 'weight' (dimensionless |c_n|^2)")
        energies.append(energy)
        weights.append(_number(doc, level, item_path, "weight", "dimensionless |c_n|^2"))
    try:
        return InternalSpectrum(tuple(energies), tuple(weights))
    except SpectrumError as e:
        raise doc.validation_error(path, "levels", str(e)) from e


def _thermal_temperature(
    doc: _Document,
    section: Mapping[str, Any],
    path: str,
    constants: PhysicalConstants,
) -> float:
    return _unit_choice(
        doc,
        section,
        path,
        {
            "temperature_k": ("K", float),
            "kt_ev": ("eV", lambda e: temperature_from_thermal_energy(ev_to_joule(e), constants)),
        },
    )


def _parse_spectrum(doc: _Document, raw: Any, path: str, constants: PhysicalConstants) -> InternalSpectrum:
    if not isinstance(raw, dict):
        raise ScenarioParseError(f"{path}: expected a JSON object with one of levels, thermal, uniform")
    section = raw
    _check_keys(doc, section, path, ("levels", "thermal", "uniform"))
    kinds = [k for k in ("levels", "thermal", "uniform") if k in section]
    if len(kinds) != 1:
        raise ScenarioValidationError(
            f"{path}: exactly one of levels, thermal, uniform must be given, got {kinds or 'none'}"
        )
    kind = kinds[0]
    try:
        if kind == "levels":
            return _parse_levels(doc, section["levels"], path)
        if kind == "thermal":
            sub_path = f"{path}.thermal"
            thermal = _section(doc, section["thermal"], path, "thermal")
            _check_keys(doc, thermal, sub_path, ("hbar_omega_ev", "temperature_k", "kt_ev", "tail_eps"))
            hbar_omega = _unit_choice(doc, thermal, sub_path, {"hbar_omega_ev": ("eV", ev_to_joule)})
            temperature = _thermal_temperature(doc, thermal, sub_path, constants)
            tail_eps = _number(doc, thermal, sub_path, "tail_eps", "dimensionless") if "tail_eps" in thermal else 1e-12
            return thermal_oscillator_spectrum(hbar_omega, temperature, tail_eps, constants=constants)
        sub_path = f"{path}.uniform"
        uniform = _section(doc, section["uniform"], path, "uniform")
        _check_keys(doc, uniform, sub_path, ("count", "spacing_ev"))
        if "count" not in uniform:
            raise ScenarioParseError(f"{sub_path}: missing 'count' (number of levels L)")
        count = _integer(doc, uniform, sub_path, "count", minimum=1)
        spacing_options = {"spacing_ev": ("eV", ev_to_joule)}
        if count > 1:
            return uniform_spectrum(count, _unit_choice(doc, uniform, sub_path, spacing_options))
        return uniform_spectrum(count, _optional_unit_choice(doc, uniform, sub_path, spacing_options) or 0.0)
    except (ScenarioParseError, ScenarioValidationError):
        raise
    except GravDephaseError as e:
        raise doc.validation_error(path, kind, str(e)) from e


def _parse_mixture(doc: _Document, raw: Any, constants: PhysicalConstants) -> MixtureEnsemble:
    if not isinstance(raw, list) or not raw:
        raise doc.parse_error("scenario", "mixture", "expected a non-empty list of {p, spectrum}")
    components: list[tuple[float, InternalSpectrum]] = []
    for i, item in enumerate(raw):
        item_path = f"mixture[{i}]"
        component = _section(doc, item, "mixture", str(i))
        _check_keys(doc, component, item_path, ("p", "spectrum"))
        if "p" not in component or "spectrum" not in component:
            raise ScenarioParseError(f"{item_path}: needs both 'p' (probability) and 'spectrum'")
        p = _number(doc, component, item_path, "p", "probability")
        components.append((p, _parse_spectrum(doc, component["spectrum"], f"{item_path}.spectrum", constants)))
    try:
        return MixtureEnsemble(tuple(components))
    except SpectrumError as e:
        raise doc.validation_error("scenario", "mixture", str(e)) from e


def _parse_geometry(doc: _Document, raw: Any, constants: PhysicalConstants) -> SuperpositionGeometry:
    path = "geometry"
    section = _section(doc, raw, "scenario", path)
    _check_keys(doc, section, path, ("g_m_s2", "delta_x_m", "delta_x_cm", "reference_x_m"))
    g = _optional_unit_choice(doc, section, path, {"g_m_s2": ("m/s^2", float)})
    delta_x = _unit_choice(
        doc,
        section,
        path,
        {"delta_x_m": ("m", float), "delta_x_cm": ("cm", lambda x: x * CM_TO_M)},
    )
    reference_x = _optional_unit_choice(doc, section, path, {"reference_x_m": ("m", float)})
    return SuperpositionGeometry(
        g=constants.g_earth if g is None else g,
        delta_x=delta_x,
        reference_x=0.0 if reference_x is None else reference_x,
    )


def _parse_bath(doc: _Document, raw: Any, constants: PhysicalConstants) -> tuple[CollisionalBath, bool]:
    path = "bath"
    section = _section(doc, raw, "scenario", path)
    _check_keys(
        doc,
        section,
        path,
        (
            "density_per_cm3",
            "density_per_m3",
            "sigma_cm2",
            "sigma_m2",
            "mass_ev_c2",
            "mass_kg",
            "temperature_k",
            "kt_ev",
            "equilibrium",
        ),
    )
    n = _unit_choice(
        doc,
        section,
        path,
        {"density_per_cm3": ("cm^-3", per_cm3_to_per_m3), "density_per_m3": ("m^-3", float)},
    )
    sigma = _unit_choice(
        doc,
        section,
        path,
        {"sigma_cm2": ("cm^2", lambda a: a * CM_TO_M * CM_TO_M), "sigma_m2": ("m^2", float)},
    )
    mass = _unit_choice(
        doc,
        section,
        path,
        {
            "mass_ev_c2": ("eV/c^2", lambda m: mass_ev_per_c2_to_kg(m, constants)),
            "mass_kg": ("kg", float),
        },
    )
    temperature = _thermal_temperature(doc, section, path, constants)
    equilibrium = section.get("equilibrium", False)
    if not isinstance(equilibrium, bool):
        raise doc.parse_error(path, "equilibrium", f"expected true or false, got {equilibrium!r}")
    try:
        return CollisionalBath(n=n, sigma=sigma, m_scatterer=mass, T=temperature), equilibrium
    except GravDephaseError as e:
        raise ScenarioValidationError(f"{path}: {e}") from e


def _parse_grid(doc: _Document, raw: Any) -> GridSpec:
    path = "grid"
    section = _section(doc, raw, "scenario", path)
    _check_keys(doc, section, path, ("start_s", "stop_s", "count", "spacing"))
    for key in ("start_s", "stop_s", "count"):
        if key not in section:
            raise ScenarioParseError(f"{path}: missing {key!r}")
    spacing = section.get("spacing", "linear")
    if spacing not in SPACINGS:
        raise doc.parse_error(path, "spacing", f"expected one of {', '.join(SPACINGS)}, got {spacing!r}")
    try:
        return GridSpec(
            start_s=_number(doc, section, path, "start_s", "s"),
            stop_s=_number(doc, section, path, "stop_s", "s"),
            count=_integer(doc, section, path, "count", minimum=1),
            spacing=spacing,
        )
    except ScenarioValidationError as e:
        raise ScenarioValidationError(f"{e}{doc.where(path)}") from e


def resolve_constants_mode(document_mode: Optional[str], override: Optional[str] = None) -> str:
    mode = override or document_mode or MODE_CODATA
    mode = mode.strip().lower()
    if mode not in MODES:
        raise ScenarioParseError(f"constants: expected one of {', '.join(MODES)}, got {mode!r}")
    return mode


def parse_scenario(text: str, *, constants_mode: Optional[str] = None) -> Scenario:
    """
    Parse and validate a scenario document into SI quantities.

    `constants_mode` (from the CLI flag or the environment) overrides the
    document's own `constants` key.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"Malformed scenario JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ScenarioParseError("Scenario document must be a JSON object")

    doc = _Document(text)
    _check_keys(doc, raw, "scenario", _TOP_KEYS)

    document_mode = raw.get("constants")
    if document_mode is not None and not isinstance(document_mode, str):
        raise doc.parse_error("scenario", "constants", f"expected a string, got {document_mode!r}")
    constants = constants_for_mode(resolve_constants_mode(document_mode, constants_mode))

    if ("spectrum" in raw) == ("mixture" in raw):
        raise ScenarioValidationError("Exactly one of 'spectrum' or 'mixture' must be given")
    if "geometry" not in raw:
        raise ScenarioParseError("scenario: missing 'geometry' (g_m_s2, delta_x_m|delta_x_cm, reference_x_m)")

    spectrum = _parse_spectrum(doc, raw["spectrum"], "spectrum", constants) if "spectrum" in raw else None
    mixture = _parse_mixture(doc, raw["mixture"], constants) if "mixture" in raw else None
    geometry = _parse_geometry(doc, raw["geometry"], constants)
    subsystems = _integer(doc, raw, "scenario", "subsystems", minimum=1) if "subsystems" in raw else 1
    bath, equilibrium = _parse_bath(doc, raw["bath"], constants) if "bath" in raw else (None, False)
    grid = _parse_grid(doc, raw["grid"]) if "grid" in raw else None

    name = raw.get("name", "scenario")
    if not isinstance(name, str):
        raise doc.parse_error("scenario", "name", f"expected a string, got {name!r}")

    scenario = Scenario(
        geometry=geometry,
        constants=constants,
        spectrum=spectrum,
        mixture=mixture,
        subsystems=subsystems,
        bath=bath,
        equilibrium=equilibrium,
        grid=grid,
        name=name,
    )
    logger.debug("Parsed scenario %r (constants=%s, N=%d)", name, constants.mode, subsystems)
    return scenario


def _levels_document(s: InternalSpectrum) -> dict[str, Any]:
    return {"levels": [{"energy_joule": e, "weight": w} for e, w in s.levels]}


def scenario_to_document(s: Scenario) -> dict[str, Any]:
    """Normalized SI form of a scenario; parsing it back yields an equal Scenario."""
    doc: dict[str, Any] = {"name": s.name, "constants": s.constants.mode}
    if s.spectrum is not None:
        doc["spectrum"] = _levels_document(s.spectrum)
    if s.mixture is not None:
        doc["mixture"] = [{"p": p, "spectrum": _levels_document(spec)} for p, spec in s.mixture.components]
    doc["geometry"] = {
        "g_m_s2": s.geometry.g,
        "delta_x_m": s.geometry.delta_x,
        "reference_x_m": s.geometry.reference_x,
    }
    doc["subsystems"] = s.subsystems
    if s.bath is not None:
        doc["bath"] = {
            "density_per_m3": s.bath.n,
            "sigma_m2": s.bath.sigma,
            "mass_kg": s.bath.m_scatterer,
            "temperature_k": s.bath.T,
            "equilibrium": s.equilibrium,
        }
    if s.grid is not None:
        doc["grid"] = {
            "start_s": s.grid.start_s,
            "stop_s": s.grid.stop_s,
            "count": s.grid.count,
            "spacing": s.grid.spacing,
        }
    return doc


# Nitrogen at room temperature scattering off a 1e-7 cm cube of ~1000 atoms,
# displaced by its own size; ~1000 independent modes, each spread over 3 levels.
_CUBE_KT_EV = 1.0 / 39.0
_CUBE_BATH = {
    "density_per_cm3": 2.5e19,
    "sigma_cm2": 1e-14,
    "mass_ev_c2": 14e9,
    "kt_ev": _CUBE_KT_EV,
    "equilibrium": True,
}

BUILTIN_SCENARIOS: dict[str, dict[str, Any]] = {
    "two-level": {
        "name": "two-level",
        "constants": "codata",
        "spectrum": {"levels": [{"energy_ev": 0.0, "weight": 0.5}, {"energy_ev": 0.1, "weight": 0.5}]},
        "geometry": {"g_m_s2": 9.81, "delta_x_m": 1e-6, "reference_x_m": 0.0},
        "subsystems": 1,
        "grid": {"start_s": 0.0, "stop_s": 8e8, "count": 401, "spacing": "linear"},
    },
    "thermal-cube": {
        "name": "thermal-cube",
        "constants": "codata",
        # Spacing s gives Delta E = s * sqrt(2/3) for 3 equal weights; pick Delta E = k_B T.
        "spectrum": {"uniform": {"count": 3, "spacing_ev": _CUBE_KT_EV * math.sqrt(1.5)}},
        "geometry": {"delta_x_cm": 1e-7, "reference_x_m": 0.0},
        "subsystems": 1000,
        "bath": dict(_CUBE_BATH),
    },
    "paper-repro": {
        "name": "paper-repro",
        "constants": "paper",
        "spectrum": {"uniform": {"count": 3, "spacing_ev": _CUBE_KT_EV * math.sqrt(1.5)}},
        "geometry": {"delta_x_cm": 1e-7, "reference_x_m": 0.0},
        "subsystems": 1000,
        "bath": dict(_CUBE_BATH),
    },
}


def builtin_document(name: str) -> dict[str, Any]:
    try:
        return copy.deepcopy(BUILTIN_SCENARIOS[name])
    except KeyError:
        raise ScenarioParseError(
            f"Unknown built-in scenario {name!r}; available: {', '.join(sorted(BUILTIN_SCENARIOS))}"
        ) from None


def load_scenario(ref: str, *, constants_mode: Optional[str] = None) -> Scenario:
    """Load `builtin:<name>` or a scenario JSON file."""
    if ref.startswith(BUILTIN_PREFIX):
        text = json.dumps(builtin_document(ref[len(BUILTIN_PREFIX) :]), indent=2)
    else:
        path = Path(ref).expanduser()
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ScenarioParseError(f"Cannot read scenario file {path}: {e}") from e
    return parse_scenario(text, constants_mode=constants_mode)
