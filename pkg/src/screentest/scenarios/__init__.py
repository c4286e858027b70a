"""Activity-type test programs run against a live device."""

from screentest.scenarios.base import (
    DEFAULT_SPLASH_TIMEOUT_MS,
    BugFinding,
    Credentials,
    ScenarioConfig,
    ScenarioOutcome,
    Severity,
)
from screentest.scenarios.programs import (
    CHECKS,
    ad_scenario,
    all_checks,
    browser_scenario,
    login_scenario,
    mail_scenario,
    portal_scenario,
    random_credential,
    run_scenario,
    splash_scenario,
    todo_scenario,
)

__all__ = [
    "CHECKS",
    "DEFAULT_SPLASH_TIMEOUT_MS",
    "BugFinding",
    "Credentials",
    "ScenarioConfig",
    "ScenarioOutcome",
    "Severity",
    "ad_scenario",
    "all_checks",
    "browser_scenario",
    "login_scenario",
    "mail_scenario",
    "portal_scenario",
    "random_credential",
    "run_scenario",
    "splash_scenario",
    "todo_scenario",
]
