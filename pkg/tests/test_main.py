import json

import pytest

from src.config import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, _env_int
from src.image_handler import validate_png
from src.main import main
from src.reports import read_trajectory_csv


def test_cc_lists_twenty_configurations(tmp_path):
    out = tmp_path / "cc.json"
    assert main(["cc", "--alpha", "1", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["count"] == 20
    assert len(report["ccs"]) == 20


def test_cc_output_is_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    main(["cc", "--alpha", "0.7", "--out", str(first)])
    main(["cc", "--alpha", "0.7", "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize("argv", [
    ["cc", "--alpha", "2.5"],
    ["cc", "--alpha", "0"],
    ["trace", "--from", "p11"],
    ["trace", "--from", "q77-"],
    ["verify-appendix", "--set", "octahedral"],
    [],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_kepler_check(tmp_path):
    out = tmp_path / "kepler.json"
    assert main(["kepler-check", "--beta", "0.5", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["error"] < 1e-6
    assert report["expected"] == pytest.approx(2 * 3.141592653589793)


def test_verify_bounds_csv(tmp_path):
    out = tmp_path / "bounds.csv"
    assert main(["verify-appendix", "--set", "planar-newton", "--format", "csv", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "name,step,direction,computed,reference,diff,status"
    assert len(lines) == 7
    assert all(line.endswith(("MATCH", "DISPUTED")) for line in lines[1:])


def test_trace_plot_and_verify(tmp_path, capsys):
    trace = tmp_path / "p11.csv"
    assert main(["trace", "--alpha", "1", "--from", "p11-", "--horizon", "20", "--out", str(trace)]) == EXIT_OK
    header, data, events = read_trajectory_csv(str(trace))
    assert header[:4] == ["sigma", "x", "v", "u"]
    assert data.shape[0] > 10
    assert events and events[-1][1].startswith("outcome:")
    outcome = json.loads((tmp_path / "p11.outcome.json").read_text())
    assert outcome["branch"].startswith("right W^u(p11-)")

    svg, png = tmp_path / "portrait.svg", tmp_path / "portrait.png"
    assert main(["plot", str(trace), "-o", str(svg), "--png", str(png)]) == EXIT_OK
    assert svg.read_text().lstrip().startswith("<?xml")
    assert validate_png(str(png))

    assert main(["verify-report", str(trace), str(tmp_path / "p11.outcome.json")]) == EXIT_OK
    assert "OK" in capsys.readouterr().out


def test_verify_report_flags_edits(tmp_path):
    out = tmp_path / "cc.json"
    main(["cc", "--out", str(out)])
    out.write_text(out.read_text() + " ")
    assert main(["verify-report", str(out)]) == EXIT_NUMERICAL


def test_plot_rejects_unknown_format(tmp_path):
    trace = tmp_path / "t.csv"
    main(["trace", "--from", "p11+", "--horizon", "5", "--out", str(trace)])
    assert main(["plot", str(trace), "-o", str(tmp_path / "p.jpg")]) == EXIT_USAGE


def test_full_trace_keeps_the_parabolic_constraint(tmp_path):
    out = tmp_path / "full.json"
    assert main(["trace", "--section", "full", "--from", "p11-", "--horizon", "0.5",
                 "--format", "json", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert len(report["final_state"]) == 8
    assert report["max_residual"] < 1e-8


def test_thread_count_falls_back_on_a_bad_environment_value(monkeypatch):
    monkeypatch.setenv("D4_THREADS", "four")
    assert _env_int("D4_THREADS", 1) == 1
    monkeypatch.setenv("D4_THREADS", "3")
    assert _env_int("D4_THREADS", 1) == 3
    monkeypatch.delenv("D4_THREADS")
    assert _env_int("D4_THREADS", 1) == 1
