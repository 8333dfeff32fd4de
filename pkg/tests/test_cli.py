import json
import math

import pytest

from main import main
from src.utils.errors import EXIT_NUMERIC_DOMAIN_ERROR, EXIT_OK, EXIT_PARSE_ERROR, EXIT_VALIDATION_ERROR


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("GRAVDEPHASE_CONSTANTS", raising=False)
    monkeypatch.delenv("GRAVDEPHASE_GRID_COUNT", raising=False)
    monkeypatch.setenv("ENV_FILE", "/nonexistent/.env")


def write_scenario(tmp_path, raw, name="scenario.json"):
    path = tmp_path / name
    path.write_text(raw if isinstance(raw, str) else json.dumps(raw, indent=2), encoding="utf-8")
    return str(path)


def test_trace_builtin_two_level(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["trace", "builtin:two-level", "-o", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t_s,visibility,small_time_approx"
    assert len(lines) == 1 + 401
    assert lines[1] == "0.0000000000000000e+00,1.0000000000000000e+00,1.0000000000000000e+00"


def test_trace_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["trace", "builtin:thermal-cube", "-o", str(first)]) == EXIT_OK
    assert main(["trace", "builtin:thermal-cube", "-o", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t_s,visibility,small_time_approx,visibility_N"
    assert len(lines) == 1 + 200


def test_trace_grid_count_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("GRAVDEPHASE_GRID_COUNT", "17")
    out = tmp_path / "trace.csv"
    assert main(["trace", "builtin:thermal-cube", "-o", str(out)]) == EXIT_OK
    assert len(out.read_text(encoding="utf-8").splitlines()) == 1 + 17


def test_trace_to_stdout(capsys):
    assert main(["trace", "builtin:two-level"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("t_s,visibility,small_time_approx\n")


def test_report_nitrogen_cube(tmp_path):
    out = tmp_path / "report.json"
    assert main(["report", "builtin:paper-repro", "-o", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["n_crossover_rendering"] == "1.2e-5 cm^-3"
    assert report["lower_bound_log"] == pytest.approx(-1000.0 * math.log(3.0), rel=1e-12)
    assert report["gravitational_dominates"] is False
    assert report["assumption"] == "independent-subsystems"


def test_report_single_level_emits_null_timescales(tmp_path):
    path = write_scenario(tmp_path, {"spectrum": {"uniform": {"count": 1}}, "geometry": {"delta_x_m": 1e-6}})
    out = tmp_path / "report.json"
    assert main(["report", path, "-o", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report == {"t_d_s": None, "t_nd_s": None, "purity_sum": 1.0, "lower_bound_log": 0.0}


def test_paper_repro(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["paper-repro", "-o", str(first)]) == EXIT_OK
    assert main(["paper-repro", "-o", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()

    payload = json.loads(first.read_text(encoding="utf-8"))
    assert payload["passed"] is True
    assert abs(payload["n_crossover_per_cm3"] - 1.2e-5) <= 0.01 * 1.2e-5
    assert abs(math.log10(payload["atmospheric_ratio"]) + 24.0) <= 1.0
    assert payload["atmospheric_ratio_passed"] is True
    assert payload["codata_passed"] is True
    assert payload["lower_bound_log"] == pytest.approx(-1000.0 * math.log(3.0), rel=1e-12)
    assert payload["t_nd_s"] == pytest.approx(1.06e10, rel=1e-2)


def test_constants_flag_wins_over_env(tmp_path, monkeypatch):
    def crossover(*argv):
        out = tmp_path / "report.json"
        assert main([*argv, "report", "builtin:thermal-cube", "-o", str(out)]) == EXIT_OK
        return json.loads(out.read_text(encoding="utf-8"))["n_crossover_per_cm3"]

    codata = crossover()
    monkeypatch.setenv("GRAVDEPHASE_CONSTANTS", "paper")
    paper = crossover()
    assert paper != codata
    assert crossover("--constants", "codata") == codata


def test_average_two_level(tmp_path):
    out = tmp_path / "average.json"
    assert main(["average", "builtin:two-level", "--window-periods", "20", "--samples", "1000", "-o", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["analytic"] == pytest.approx(0.5)
    assert payload["numeric"] == pytest.approx(0.5, abs=1e-6)
    assert payload["near_commensurate"] is False
    assert payload["tolerance"] == 0.02
    assert payload["passed"] is True


def test_exit_codes(tmp_path):
    assert main(["trace", write_scenario(tmp_path, "{oops", "broken.json")]) == EXIT_PARSE_ERROR
    assert main(["trace", str(tmp_path / "missing.json")]) == EXIT_PARSE_ERROR
    assert main(["frobnicate"]) == EXIT_PARSE_ERROR

    unnormalized = {
        "spectrum": {"levels": [{"energy_ev": 0.0, "weight": 0.5}, {"energy_ev": 0.1, "weight": 0.4}]},
        "geometry": {"delta_x_m": 1e-6},
    }
    assert main(["report", write_scenario(tmp_path, unnormalized)]) == EXIT_VALIDATION_ERROR

    short_window = ["average", "builtin:two-level", "--window-periods", "5", "--samples", "100"]
    assert main(short_window) == EXIT_VALIDATION_ERROR
    too_few_samples = ["average", "builtin:two-level", "--window-periods", "20", "--samples", "1"]
    assert main(too_few_samples) == EXIT_NUMERIC_DOMAIN_ERROR


def test_bad_env_constants_is_a_parse_error(monkeypatch):
    monkeypatch.setenv("GRAVDEPHASE_CONSTANTS", "natural")
    assert main(["report", "builtin:two-level"]) == EXIT_PARSE_ERROR
