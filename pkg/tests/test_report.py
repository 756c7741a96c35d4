from __future__ import annotations

import json

import pytest

from selfsim import ScenarioReport, emit_report, load_report, load_scenario, run_scenario
from selfsim.report import render_comparison

CONSTANT_DOC = {
    "coefficients": [1],
    "references": [{"label": "exact", "value": 1, "source": "constant function"}],
}


@pytest.fixture(scope="module")
def oscillator_report():
    return run_scenario(load_scenario("oscillator"), pipelines=["power-restriction", "factor"])


def test_csv_is_deterministic(oscillator_report):
    again = run_scenario(load_scenario("oscillator"), pipelines=["power-restriction", "factor"])
    assert emit_report(oscillator_report, "csv") == emit_report(again, "csv")
    assert emit_report(oscillator_report, "csv").splitlines()[0] == "k,method,value,error_percent,status"


def test_json_round_trip(oscillator_report):
    text = emit_report(oscillator_report, "json-doc")
    json.loads(text)
    back = load_report(text)
    assert emit_report(back, "csv") == emit_report(oscillator_report, "csv")


def test_inapplicable_pipeline_is_annotated(oscillator_report):
    assert any(a.startswith("power-restriction: inapplicable") for a in oscillator_report.annotations)


def test_unknown_format(oscillator_report):
    with pytest.raises(ValueError):
        emit_report(oscillator_report, "yaml")


def test_empty_report_rejected():
    with pytest.raises(ValueError):
        emit_report(ScenarioReport("empty", (), (), None, (), ()), "csv")


def test_trivial_constant_has_zero_error():
    report = run_scenario(load_scenario(CONSTANT_DOC), pipelines=["variable-transformation"])
    assert all(r.error_percent == 0 for r in report.rows if r.status == "ok")
    assert report.final_for("variable-transformation").value == 1


def test_polaron_report_rows():
    report = run_scenario(load_scenario("polaron"))
    rows = report.rows_for("bootstrap-prediction")
    assert [r.k for r in rows][:2] == [3, 4]
    assert all(r.status == "ok" for r in rows)


def test_unavailable_orders_are_rows_not_errors():
    doc = {"coefficients": [1, 0, 0], "prefactor": {"amplitude": 1, "exponent": -1}, "pipelines": ["power-restriction"]}
    report = run_scenario(load_scenario(doc))
    assert report.all_unavailable
    assert all(r.status == "unavailable" and r.note for r in report.rows)


def test_comparison_table_lists_both_pipelines():
    text = render_comparison(run_scenario(load_scenario("string")))
    assert "power-restriction" in text and "variable-transformation" in text
    assert "0.0771" in text
