import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screentest.activity import ActivityType
from screentest.runner import (
    CrashRecord,
    ReportError,
    ScreenEntry,
    TestReport,
    explore_suite,
    generate_report,
    parse_run_document,
)
from screentest.runner.report import CrashLog, report_from_dict, report_to_dict, run_document
from screentest.scenarios import BugFinding, ScenarioOutcome, Severity
from screentest.simdevice import bundled_app, inject_all


def empty(app="demo"):
    return TestReport(app, "scenarios", (), (), (), (), 0)


@pytest.fixture(scope="module")
def faulted_reports(model):
    return explore_suite([inject_all(bundled_app(n)) for n in ("k9replica", "crimetalk_replica")], model)


def test_empty_summary():
    text = generate_report(empty())
    assert "Summary: 0 logical bugs, 0 crashes" in text


def test_plurals():
    f = BugFinding("S", ActivityType.MAIL, "mail-open", "d")
    r = TestReport("a", "scenarios", (), (), (f,), (CrashRecord("S", "m"),), 0)
    assert "Summary: 1 logical bug, 1 crash" in generate_report(r)


def test_ten_finding_blocks(faulted_reports):
    text = generate_report(faulted_reports, "text")
    assert sum(line.startswith("Bug #") for line in text.splitlines()) == 10
    assert "Total: 10 logical bugs, 0 crashes" in text
    for check in ("login-empty-bypass", "mail-send-valid", "portal-article"):
        assert f"Check:       {check}" in text


def test_text_includes_classification(faulted_reports):
    text = generate_report(faulted_reports)
    assert "classified Login" in text and "true Login" in text
    assert "MISCLASSIFIED" not in text


def test_forms_agree_on_counts(faulted_reports):
    doc = json.loads(generate_report(faulted_reports, "structured"))
    assert doc["summary"] == {"logical_bugs": 10, "crashes": 0}
    assert [r["counts"]["logical_bugs"] for r in doc["reports"]] == [7, 3]


def test_structured_round_trip(faulted_reports):
    text = generate_report(faulted_reports, "structured")
    assert parse_run_document(text) == faulted_reports
    assert generate_report(parse_run_document(text), "structured") == text


def test_wall_clock_only_on_request(faulted_reports):
    assert "wall_clock_s" not in generate_report(faulted_reports, "structured")
    assert "wall_clock_s" in generate_report(faulted_reports, "structured", include_wall_clock=True)


def test_per_screen_outcomes_aggregate(faulted_reports):
    for r in faulted_reports:
        per_screen = [f for e in r.entries if e.outcome for f in e.outcome.findings]
        logical = [f for f in per_screen if f.severity is Severity.LOGICAL]
        assert tuple(logical) == r.findings


def test_count_mismatch_rejected(faulted_reports):
    doc = run_document(faulted_reports)
    doc["reports"][0]["counts"]["logical_bugs"] = 99
    with pytest.raises(ReportError, match="counts"):
        parse_run_document(json.dumps(doc))


@pytest.mark.parametrize("text", ["{", "[]", '{"schema_version": 2, "reports": []}', '{"schema_version": 1}'])
def test_bad_documents(text):
    with pytest.raises(ReportError):
        parse_run_document(text)


def test_missing_field():
    d = report_to_dict(empty())
    del d["app"]
    with pytest.raises(ReportError):
        report_from_dict(d)


def test_unknown_format():
    with pytest.raises(ValueError):
        generate_report(empty(), "html")


def test_crash_log_dedupes():
    log = CrashLog()
    log.add("A", "x")
    log.add("B", "y")
    log.add("A", "x")
    assert log.records() == (CrashRecord("A", "x", 2), CrashRecord("B", "y", 1))


_types = st.sampled_from(list(ActivityType))
_findings = st.builds(
    BugFinding, st.sampled_from(["S1", "S2"]), _types, st.sampled_from(["c1", "c2", "c3"]),
    st.text(min_size=1, max_size=8), st.just(Severity.LOGICAL),
)


@settings(max_examples=50, deadline=None)
@given(st.lists(_findings, max_size=6), st.lists(st.builds(CrashRecord, st.just("S"), st.text(min_size=1, max_size=5), st.integers(1, 9)), max_size=3))
def test_random_reports_consistent(findings, crashes):
    entry = ScreenEntry("S1", (1.0,) * 15, ActivityType.MAIL, None, ScenarioOutcome(tuple(findings), 3, ()))
    r = TestReport("a", "scenarios", ("F-1",), (entry,), tuple(findings), tuple(crashes), 1234)
    doc = json.loads(generate_report(r, "structured"))
    assert doc["summary"] == {"logical_bugs": len(findings), "crashes": len(crashes)}
    text = generate_report(r)
    assert sum(line.startswith("Bug #") for line in text.splitlines()) == len(findings)
    assert sum(line.startswith("Crash #") for line in text.splitlines()) == len(crashes)
    assert parse_run_document(generate_report(r, "structured")) == [r]
