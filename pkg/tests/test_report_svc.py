import json

from app.services.report_svc import (
    STATUS_FAIL,
    STATUS_PASS,
    Failure,
    ReportBuilder,
    all_passed,
    format_table,
    reports_to_json,
    save_reports,
)


def test_builder_keeps_smallest_counterexample():
    builder = ReportBuilder("demo", {"p": 3})
    builder.compare_sequences("late", [1, 2, 3, 4], [1, 2, 3, 5])
    builder.compare("early", 1, 7, 8)
    report = builder.finish()
    assert report.status == STATUS_FAIL
    assert report.first_failure == Failure(1, 7, 8, "early")
    assert report.range == (0, 3)


def test_builder_passes_without_mismatches():
    builder = ReportBuilder("demo", {})
    builder.compare_sequences("ok", [1, 1, 2], [1, 1, 2], start=5)
    report = builder.finish()
    assert report.passed
    assert report.status == STATUS_PASS
    assert report.range == (5, 7)


def test_big_integers_are_serialized_as_text():
    builder = ReportBuilder("big", {})
    builder.compare("series", 3, 10 ** 30, 10 ** 30 + 1)
    data = json.loads(builder.finish().to_json())
    assert data["first_failure"] == {"n": 3, "lhs": str(10 ** 30), "rhs": str(10 ** 30 + 1), "check": "series"}
    assert data["range"] == [3, 3]


def test_format_table_and_summary():
    ok = ReportBuilder("ok", {"N": 5})
    ok.compare("x", 0, 1, 1)
    bad = ReportBuilder("bad", {"N": 5})
    bad.compare("x", 2, 1, 0)
    reports = [ok.finish(), bad.finish()]
    assert not all_passed(reports)
    table = format_table(reports)
    assert table.splitlines()[-1] == "1/2 suites pass"
    assert "x n=2: 1 != 0" in table
    assert [item["identity_id"] for item in json.loads(reports_to_json(reports))] == ["ok", "bad"]


def test_save_reports(tmp_path):
    builder = ReportBuilder("ok", {})
    builder.compare("x", 0, 1, 1)
    path = save_reports([builder.finish()], "corrida", results_dir=str(tmp_path))
    assert path == str(tmp_path / "corrida.json")
    payload = json.loads((tmp_path / "corrida.json").read_text())
    assert payload["passed"] is True
    assert payload["reports"][0]["identity_id"] == "ok"
