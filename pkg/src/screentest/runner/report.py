"""Test reports: the in-memory model plus text and structured renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from screentest.activity import ActivityType
from screentest.scenarios.base import BugFinding, ScenarioOutcome, Severity

REPORT_SCHEMA_VERSION = 1


class ReportError(ValueError):
    pass


@dataclass(frozen=True)
class ScreenEntry:
    screen_id: str
    features: tuple[float, ...] | None
    classified_type: ActivityType | None
    true_type: ActivityType | None
    outcome: ScenarioOutcome | None


@dataclass(frozen=True)
class CrashRecord:
    screen_id: str
    message: str
    occurrences: int = 1


class CrashLog:
    """Crash records keyed by (screen, message), in first-seen order."""

    def __init__(self) -> None:
        self._counts: dict[tuple[str, str], int] = {}

    def add(self, screen_id: str, message: str) -> None:
        key = (screen_id, message)
        self._counts[key] = self._counts.get(key, 0) + 1

    def records(self) -> tuple[CrashRecord, ...]:
        return tuple(CrashRecord(s, m, n) for (s, m), n in self._counts.items())


@dataclass(frozen=True)
class TestReport:
    """Result of one run on one app. Durations are virtual device time."""

    __test__ = False  # not a pytest class

    app: str
    mode: str
    faults: tuple[str, ...]
    entries: tuple[ScreenEntry, ...]
    findings: tuple[BugFinding, ...]
    crashes: tuple[CrashRecord, ...]
    duration_ms: int
    events: int = 0
    budget_exhausted: bool = False
    wall_clock_s: float | None = field(default=None, compare=False)

    @property
    def logical_bug_count(self) -> int:
        return len(self.findings)

    @property
    def crash_count(self) -> int:
        return len(self.crashes)


def _plural(n: int, word: str, plural: str) -> str:
    return f"{n} {word if n == 1 else plural}"


def summary_line(reports: Sequence[TestReport]) -> str:
    bugs = sum(r.logical_bug_count for r in reports)
    crashes = sum(r.crash_count for r in reports)
    return f"{_plural(bugs, 'logical bug', 'logical bugs')}, {_plural(crashes, 'crash', 'crashes')}"


def _text_one(r: TestReport) -> list[str]:
    faults = ", ".join(r.faults) if r.faults else "none"
    lines = [
        f"== {r.app} ({r.mode}) ==",
        f"Injected faults: {faults}",
        f"Virtual duration: {r.duration_ms / 1000:.1f} s"
        + (f", {r.events} events" if r.events else "")
        + (" (budget exhausted)" if r.budget_exhausted else ""),
    ]
    if r.wall_clock_s is not None:
        lines.append(f"Wall clock: {r.wall_clock_s:.2f} s")
    if r.entries:
        lines.append("")
        lines.append("Screens:")
        for e in r.entries:
            cls = e.classified_type.value if e.classified_type else "-"
            true = e.true_type.value if e.true_type else "?"
            mark = "" if e.classified_type is None or e.classified_type is e.true_type else "  MISCLASSIFIED"
            if e.outcome is not None:
                o = e.outcome
                tail = f"{o.checks_run} checks, {len(o.findings)} findings, {len(o.inconclusive)} inconclusive"
            else:
                tail = "not tested"
            lines.append(f"  {e.screen_id:<22} classified {cls:<14} true {true:<14} {tail}{mark}")
    for k, f in enumerate(r.findings, 1):
        lines += [
            "",
            f"Bug #{k}",
            f"  Activity:    {f.screen_id}",
            f"  Classified:  {f.classified_type.value}",
            f"  Check:       {f.check_id}",
            f"  Severity:    {f.severity.value}",
            f"  Description: {f.description}",
        ]
    for k, c in enumerate(r.crashes, 1):
        lines += [
            "",
            f"Crash #{k}",
            f"  Activity:    {c.screen_id}",
            f"  Occurrences: {c.occurrences}",
            f"  Message:     {c.message}",
        ]
    lines += ["", f"Summary: {summary_line([r])}"]
    return lines


def _finding_dict(f: BugFinding) -> dict[str, Any]:
    return {
        "screen_id": f.screen_id,
        "classified_type": f.classified_type.value,
        "check_id": f.check_id,
        "description": f.description,
        "severity": f.severity.value,
    }


def _outcome_dict(o: ScenarioOutcome) -> dict[str, Any]:
    return {
        "checks_run": o.checks_run,
        "findings": [_finding_dict(f) for f in o.findings],
        "inconclusive": [{"check_id": c, "reason": why} for c, why in o.inconclusive],
    }


def _num(v: float) -> int | float:
    return int(v) if float(v).is_integer() else v


def report_to_dict(r: TestReport, include_wall_clock: bool = False) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "app": r.app,
        "mode": r.mode,
        "faults": list(r.faults),
        "duration_ms": r.duration_ms,
        "events": r.events,
        "budget_exhausted": r.budget_exhausted,
        "counts": {"logical_bugs": r.logical_bug_count, "crashes": r.crash_count},
        "screens": [
            {
                "screen_id": e.screen_id,
                "features": None if e.features is None else [_num(v) for v in e.features],
                "classified_type": e.classified_type.value if e.classified_type else None,
                "true_type": e.true_type.value if e.true_type else None,
                "outcome": None if e.outcome is None else _outcome_dict(e.outcome),
            }
            for e in r.entries
        ],
        "findings": [_finding_dict(f) for f in r.findings],
        "crashes": [
            {"screen_id": c.screen_id, "message": c.message, "occurrences": c.occurrences} for c in r.crashes
        ],
    }
    if include_wall_clock and r.wall_clock_s is not None:
        doc["wall_clock_s"] = r.wall_clock_s
    return doc


def _finding_from(d: dict[str, Any]) -> BugFinding:
    return BugFinding(
        d["screen_id"],
        ActivityType.parse(d["classified_type"]),
        d["check_id"],
        d["description"],
        Severity(d["severity"]),
    )


def _type_or_none(v: str | None) -> ActivityType | None:
    return None if v is None else ActivityType.parse(v)


def report_from_dict(d: dict[str, Any]) -> TestReport:
    try:
        entries = []
        for s in d["screens"]:
            o = s["outcome"]
            outcome = None
            if o is not None:
                outcome = ScenarioOutcome(
                    tuple(_finding_from(f) for f in o["findings"]),
                    o["checks_run"],
                    tuple((i["check_id"], i["reason"]) for i in o["inconclusive"]),
                )
            entries.append(
                ScreenEntry(
                    s["screen_id"],
                    None if s["features"] is None else tuple(s["features"]),
                    _type_or_none(s["classified_type"]),
                    _type_or_none(s["true_type"]),
                    outcome,
                )
            )
        report = TestReport(
            app=d["app"],
            mode=d["mode"],
            faults=tuple(d["faults"]),
            entries=tuple(entries),
            findings=tuple(_finding_from(f) for f in d["findings"]),
            crashes=tuple(CrashRecord(c["screen_id"], c["message"], c["occurrences"]) for c in d["crashes"]),
            duration_ms=d["duration_ms"],
            events=d.get("events", 0),
            budget_exhausted=d.get("budget_exhausted", False),
            wall_clock_s=d.get("wall_clock_s"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportError(f"malformed report: {exc!r}") from None
    counts = d.get("counts", {})
    if counts and (counts.get("logical_bugs"), counts.get("crashes")) != (
        report.logical_bug_count,
        report.crash_count,
    ):
        raise ReportError("report counts disagree with the finding and crash lists")
    return report


def run_document(reports: Iterable[TestReport], include_wall_clock: bool = False) -> dict[str, Any]:
    rs = list(reports)
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "summary": {
            "logical_bugs": sum(r.logical_bug_count for r in rs),
            "crashes": sum(r.crash_count for r in rs),
        },
        "reports": [report_to_dict(r, include_wall_clock) for r in rs],
    }


def parse_run_document(text: str) -> list[TestReport]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ReportError(f"expected a run document with schema_version {REPORT_SCHEMA_VERSION}")
    if not isinstance(doc.get("reports"), list):
        raise ReportError("run document has no 'reports' list")
    return [report_from_dict(r) for r in doc["reports"]]


def generate_report(
    report: TestReport | Sequence[TestReport],
    format: str = "text",
    include_wall_clock: bool = False,
) -> str:
    """Render one or more reports as ``text`` or ``structured`` (JSON)."""
    reports = [report] if isinstance(report, TestReport) else list(report)
    if format == "structured":
        return json.dumps(run_document(reports, include_wall_clock), indent=2, sort_keys=False) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    lines: list[str] = []
    for r in reports:
        if lines:
            lines.append("")
        lines += _text_one(r)
    if len(reports) != 1:
        if lines:
            lines.append("")
        lines.append(f"Total: {summary_line(reports)}")
    return "\n".join(lines) + "\n"
