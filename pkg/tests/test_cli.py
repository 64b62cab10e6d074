import io
import json
import os
from datetime import datetime, timezone

import numpy as np
import pandas as pd
import pytest

from collector.sample_collector import SampleCollector, load_samples
from main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, parse_arguments, parse_points
from reporting.report_agent import ReportAgent, format_json, to_plain
from utils.errors import RejectedInputError

CONFIG = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config.json")


def run(capsys, *argv):
    code = main(list(argv) + ["--config", CONFIG])
    return code, capsys.readouterr().out


def test_eval_prints_the_envelope(capsys):
    code, out = run(capsys, "eval", "--op", "T", "--f", "chi(-1,1)", "--points", "0.5,-0.25",
                    "--method", "quadrature")
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["command"] == "eval"
    assert envelope["summary"] == {"pass": 2, "fail": 0}
    by_t = {case["t"]: case["value"] for case in envelope["cases"]}
    assert by_t[0.5] == pytest.approx(np.log(1.0 / 3.0) / np.pi, abs=1e-10)
    assert by_t[-0.25] == pytest.approx(np.log(1.25 / 0.75) / np.pi, abs=1e-10)
    assert {case["method"] for case in envelope["cases"]} == {"quadrature"}


def test_eval_functionals(capsys):
    code, out = run(capsys, "eval", "--op", "phi", "--f", "1")
    assert code == EXIT_OK
    case = json.loads(out)["cases"][0]
    assert case["value"] == pytest.approx(np.pi, abs=1e-9)
    assert not case["in_kernel"]


def test_norm_command(capsys):
    code, out = run(capsys, "norm", "--f", "chi(-1,1)")
    assert code == EXIT_OK
    case = json.loads(out)["cases"][0]
    assert case["lexp_primary"] == pytest.approx(1.0, abs=1e-10)
    assert case["llogl"] == pytest.approx(4.0, abs=1e-10)


def test_invert_of_a_polynomial(capsys):
    code, out = run(capsys, "invert", "--g", "x", "--points", "0,0.5")
    assert code == EXIT_OK
    case = json.loads(out)["cases"][0]
    assert case["residual_sup"] <= 1e-7
    values = dict((t, v) for t, v in case["values"])
    assert values[0.5] == pytest.approx(-np.sqrt(0.75), abs=1e-8)


def test_invert_outside_the_range_fails(capsys):
    code, out = run(capsys, "invert", "--g", "chi(-1,1)")
    assert code == EXIT_FAILED
    case = json.loads(out)["cases"][0]
    assert case["pass"] is False
    assert case["membership"]["phi_value"] == pytest.approx(np.pi, abs=1e-7)


def test_invert_of_the_logarithmic_profile(capsys):
    code, out = run(capsys, "invert", "--g", "log((1-x)/(1+x))/pi", "--points", "-0.5,0,0.5")
    assert code == EXIT_OK
    case = json.loads(out)["cases"][0]
    assert case["membership"]["overall"]
    assert all(v == pytest.approx(1.0, abs=1e-6) for _, v in case["values"])


def test_exhausted_panel_budget_is_a_failed_case(capsys, monkeypatch):
    monkeypatch.setenv("FHT_MAX_PANELS", "1")
    code, out = run(capsys, "eval", "--op", "T", "--f", "log(1-x)", "--points", "0.5", "--method", "quadrature")
    assert code == EXIT_FAILED
    case = json.loads(out)["cases"][0]
    assert case["pass"] is False
    assert "panels" in case["reason"]


def test_forced_inversion_reports_the_defect(capsys):
    code, out = run(capsys, "invert", "--g", "chi(-1,1)", "--force", "--points", "0.5")
    assert code == EXIT_OK
    case = json.loads(out)["cases"][0]
    assert case["forced"]
    assert case["defect"] == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("argv", [
    ["eval", "--f", "x + * 2", "--points", "0.5"],
    ["eval", "--f", "x", "--points", "0.5,abc"],
    ["eval", "--f", "x", "--points", "1.5"],
    ["norm", "--f", "csv:/nonexistent/samples.csv"],
])
def test_usage_errors_exit_with_two(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == ""


def test_verify_single_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "kernel", "--seed", "3", "--n", "5")
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["seed"] == 3
    assert [c["id"] for c in envelope["cases"]] == ["kernel-00-spectral", "kernel-01-quadrature"]


def test_probe_command_declines_bounded_input(capsys):
    code, out = run(capsys, "probe-domain", "--f", "chi(0,1)", "--n", "5")
    assert code == EXIT_OK
    cases = json.loads(out)["cases"]
    assert cases[0]["id"] == "probe-precondition" and cases[0]["declined"]


def test_csv_format_and_out_file(tmp_path, capsys):
    target = tmp_path / "reports" / "t.csv"
    code, out = run(capsys, "eval", "--f", "w", "--points", "0.25,0.5", "--format", "csv", "--out", str(target))
    assert code == EXIT_OK
    assert out == ""
    frame = pd.read_csv(target)
    assert list(frame["id"]) == ["point-0000", "point-0001"]
    assert np.allclose(frame["value"], [-0.25, -0.5], atol=1e-12)


def test_csv_samples_as_input(tmp_path, capsys):
    path = tmp_path / "samples.csv"
    x = np.linspace(-0.999, 0.999, 101)
    pd.DataFrame({"x": x, "value": np.ones_like(x)}).to_csv(path, index=False)
    code, out = run(capsys, "norm", "--f", f"csv:{path}")
    assert code == EXIT_OK
    assert json.loads(out)["cases"][0]["lexp_primary"] == pytest.approx(1.0, abs=1e-9)


def test_parse_points():
    assert parse_points("") == []
    assert parse_points("0.5, -0.25,") == [0.5, -0.25]
    args = parse_arguments(["verify", "--suite", "all"])
    assert args.suite == "all" and args.seed == 0 and args.format == "json"


def test_sample_collector_rejects_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,value\n-0.5,1\n0.0,abc\n0.5,2\n")
    with pytest.raises(RejectedInputError, match="row 2"):
        load_samples(str(path))
    result = SampleCollector().run({"records": [{"x": 0.5, "value": 1.0}, {"x": 0.2, "value": 1.0}]})
    assert result["status"] == "error"
    assert "increasing" in result["message"]


def test_sample_collector_interpolates():
    result = SampleCollector().run({"records": [{"x": -0.5, "value": 0.0}, {"x": 0.5, "value": 1.0}]})
    assert result["status"] == "success"
    handle = result["data"]["handle"]
    assert handle(np.array([0.0]))[0] == pytest.approx(0.5)
    assert result["data"]["count"] == 2


def test_report_agent_is_deterministic_apart_from_the_timestamp():
    cases = [{"id": "b", "pass": False, "value": np.float64(0.1)}, {"id": "a", "pass": True, "value": 1.0 / 3.0}]
    started = datetime.now(timezone.utc)
    first = ReportAgent().run({"command": "x", "seed": 1, "cases": cases, "started_at": started})["data"]
    second = ReportAgent().run({"command": "x", "seed": 1, "cases": cases, "started_at": started})["data"]
    for envelope in (first["envelope"], second["envelope"]):
        envelope.pop("timestamp")
    assert first["envelope"] == second["envelope"]
    assert [c["id"] for c in first["envelope"]["cases"]] == ["a", "b"]
    assert first["envelope"]["summary"] == {"pass": 1, "fail": 1}
    assert json.loads(first["text"])["cases"][0]["value"] == 1.0 / 3.0


def test_format_json_keeps_full_precision():
    text = format_json({"v": 0.1 + 0.2, "n": float("nan"), "ok": True, "arr": to_plain(np.arange(2))})
    data = json.loads(text)
    assert data["v"] == 0.1 + 0.2
    assert data["n"] == "nan"
    assert data["arr"] == [0, 1]


def test_csv_report_flattens_lists():
    text = ReportAgent("csv").run({"command": "x", "cases": [{"id": "a", "pair": [1.0, 2.0]}]})["data"]["text"]
    frame = pd.read_csv(io.StringIO(text))
    assert json.loads(frame["pair"][0]) == [1.0, 2.0]
