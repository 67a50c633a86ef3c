import json

import numpy as np
import pytest

from src.estimates import BoundReport, DISPUTED, MATCH
from src.reports import (
    FULL_HEADER,
    SECTION_HEADER,
    IntegrityError,
    ReportError,
    bound_rows,
    bound_table_markdown,
    format_float,
    read_trajectory_csv,
    verify_report,
    write_json,
    write_trajectory_csv,
)


def test_json_output_is_deterministic(tmp_path):
    payload = {"b": np.float64(1.0) / 3.0, "a": [np.int64(2), True], "c": {"z": 0.1 + 0.2}}
    first = write_json(payload, str(tmp_path / "one.json"))
    second = write_json(dict(reversed(list(payload.items()))), str(tmp_path / "two.json"))
    assert first == second
    assert first.endswith("\n")
    assert json.loads(first) == {"a": [2, True], "b": 0.333333333333, "c": {"z": 0.3}}
    assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()


def test_non_finite_values_are_written_as_strings():
    assert json.loads(write_json({"x": float("inf")}, "-")) == {"x": "inf"}


def test_sidecar_digest_verifies_and_detects_tampering(tmp_path):
    path = tmp_path / "report.json"
    write_json({"alpha": 1.0}, str(path))
    sidecar = (tmp_path / "report.json.sha256").read_text()
    assert sidecar.endswith("  report.json\n")
    assert verify_report(str(path)) == sidecar.split()[0]

    path.write_text(path.read_text().replace("1.0", "1.5"))
    with pytest.raises(IntegrityError):
        verify_report(str(path))


def test_verify_without_sidecar(tmp_path):
    path = tmp_path / "orphan.json"
    path.write_text("{}\n")
    with pytest.raises(ReportError):
        verify_report(str(path))


def test_trajectory_csv_reads_back(tmp_path):
    sigma = np.linspace(0.0, 1.0, 5)
    states = np.column_stack([sigma, -sigma, sigma ** 2])
    residuals = np.full(5, 1e-14)
    path = tmp_path / "run.csv"
    write_trajectory_csv(sigma, states, residuals, [(0.5, "v_zero"), (1.0, "outcome:arm_escape:B2^{s,+}")],
                         str(path))

    header, data, events = read_trajectory_csv(str(path))
    assert tuple(header) == SECTION_HEADER
    assert data.shape == (5, 5)
    assert np.allclose(data[:, 1:4], states)
    assert events == [(0.5, "v_zero"), (1.0, "outcome:arm_escape:B2^{s,+}")]
    verify_report(str(path))


def test_trajectory_csv_checks_state_width():
    with pytest.raises(ReportError):
        write_trajectory_csv(np.zeros(2), np.zeros((2, 3)), full=True)
    text = write_trajectory_csv(np.zeros(1), np.zeros((1, 8)), full=True)
    assert text.splitlines()[0] == "sigma,rho,v,sx,sy,sz,wx,wy,wz,energy_residual"
    assert text.splitlines()[0] == ",".join(FULL_HEADER)


def test_format_float_uses_twelve_significant_digits():
    assert format_float(1.0 / 7.0) == "0.142857142857"
    assert format_float(None) == ""


def test_bound_tables():
    reports = [BoundReport("planar.newton.v1", "1a", "upper", -0.80141, -0.8014, 1.0),
               BoundReport("planar.newton.v_pi4", "1d", "upper", -0.4, -0.5630, 1.0, DISPUTED, "note")]
    table = bound_table_markdown(reports)
    lines = table.splitlines()
    assert len(lines) == 4
    assert lines[2].startswith("| planar.newton.v1 | 1a | upper |")
    assert lines[3].endswith(f"| {DISPUTED} |")

    header, rows = bound_rows(reports)
    assert header[0] == "name"
    assert rows[0][-1] == MATCH
