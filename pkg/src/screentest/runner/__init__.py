"""Orchestration: explore and test, monkey baseline, dataset generation, reports."""

from screentest.runner.config import ConfigError, EventMix, RunConfig, load_run_config
from screentest.runner.dataset_gen import build_dataset_from_apps
from screentest.runner.explore import explore_and_test, explore_suite
from screentest.runner.monkey import monkey_run
from screentest.runner.report import (
    CrashRecord,
    ReportError,
    ScreenEntry,
    TestReport,
    generate_report,
    parse_run_document,
)

__all__ = [
    "ConfigError",
    "CrashRecord",
    "EventMix",
    "ReportError",
    "RunConfig",
    "ScreenEntry",
    "TestReport",
    "build_dataset_from_apps",
    "explore_and_test",
    "explore_suite",
    "generate_report",
    "load_run_config",
    "monkey_run",
    "parse_run_document",
]
