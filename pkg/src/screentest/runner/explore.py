"""The explore, classify and test loop."""

from __future__ import annotations

import time
from collections import deque
from typing import Sequence

from screentest.activity import ActivityType
from screentest.features import extract_features
from screentest.hierarchy import ScreenSnapshot, flatten
from screentest.learn.kstar import KStarModel, kstar_predict
from screentest.lexicon import LexiconConfig
from screentest.runner.config import RunConfig
from screentest.runner.report import CrashLog, ScreenEntry, TestReport
from screentest.scenarios.base import Credentials, ScenarioConfig, Severity
from screentest.scenarios.programs import find_login_form, run_scenario
from screentest.simdevice.device import Device, DeviceAction, ObservationKind
from screentest.simdevice.model import ActionKind, SimApp

Path = tuple[DeviceAction, ...]


def credentials_for(app: SimApp, config: RunConfig) -> Credentials | None:
    if config.credentials is not None:
        return config.credentials
    if app.test_account is not None:
        return Credentials(*app.test_account)
    return None


def candidate_actions(
    snap: ScreenSnapshot,
    predicted: ActivityType,
    lexicon: LexiconConfig,
    credentials: Credentials | None,
    wait_ms: int,
) -> list[Path]:
    """Ways to leave a screen, tried in this order: wait, log in, tap each clickable."""
    clickables = [el for el in flatten(snap) if el.clickable]
    out: list[Path] = []
    if predicted is ActivityType.SPLASH or not clickables:
        out.append((DeviceAction.wait(wait_ms),))
    form = find_login_form(snap, lexicon)
    if form is not None and credentials is not None:
        user, password, submit = form
        out.append(
            (
                DeviceAction.at(ActionKind.TYPE_TEXT, user, credentials.username),
                DeviceAction.at(ActionKind.TYPE_TEXT, password, credentials.password),
                DeviceAction.at(ActionKind.TAP, submit),
            )
        )
    out.extend((DeviceAction.at(ActionKind.TAP, el),) for el in clickables)
    return out


def explore_and_test(
    app: SimApp,
    model: KStarModel,
    config: RunConfig | None = None,
    lexicon: LexiconConfig | None = None,
) -> TestReport:
    """Breadth-first visit of every reachable screen, running the scenario for its predicted type.

    Each screen is visited once. Screens are reached by replaying the
    recorded action path from a fresh launch, which is also how scenarios
    reset between checks. Replays and exploration steps have a known worst
    case cost and are only started when they fit in the remaining budget;
    a scenario starts whenever budget remains, so the budget is overrun by
    at most one scenario.
    """
    cfg = config or RunConfig()
    lex = lexicon or cfg.lexicon()
    creds = credentials_for(app, cfg)
    started = time.perf_counter()
    device = Device(app)
    crashes = CrashLog()
    entries: list[ScreenEntry] = []
    findings = []

    def reach(path: Path) -> ScreenSnapshot | None:
        device.restart()
        for action in path:
            if device.step(action).kind is ObservationKind.CRASHED:
                return None
            if not device.live:
                return None
        return device.snapshot()

    def cost(actions: Path) -> int:
        """Worst-case virtual time of a relaunch followed by ``actions``."""
        return device.launch_cost_ms + sum(
            a.duration_ms if a.kind is ActionKind.WAIT else device.action_cost_ms for a in actions
        )

    def over_budget(upcoming: int = 0) -> bool:
        return device.clock_ms >= cfg.time_budget_ms or device.clock_ms + upcoming > cfg.time_budget_ms

    first = device.snapshot()
    seen = {first.activity_name}
    queue: deque[Path] = deque([()])
    exhausted = False
    while queue:
        if over_budget(cost(queue[0])):
            exhausted = True
            break
        path = queue.popleft()
        snap = reach(path)
        if snap is None:
            continue
        screen_id = snap.activity_name
        fv = extract_features(snap, lex)
        predicted, _ = kstar_predict(model, fv.as_floats())
        sdef = app.screens.get(screen_id)
        scen_cfg = ScenarioConfig(
            credentials=creds,
            lexicon=lex,
            seed=cfg.scenario_seed,
            splash_timeout_ms=cfg.splash_timeout_ms,
            reset=lambda _d, p=path: reach(p),
        )
        outcome = run_scenario(predicted, device, scen_cfg)
        for f in outcome.findings:
            if f.severity is Severity.CRASH:
                crashes.add(screen_id, f.description)
            else:
                findings.append(f)
        entries.append(
            ScreenEntry(screen_id, fv.as_floats(), predicted, sdef.true_type if sdef else None, outcome)
        )
        for actions in candidate_actions(snap, predicted, lex, creds, cfg.splash_timeout_ms):
            if over_budget(cost(path + actions)):
                exhausted = True
                break
            if reach(path) is None:
                break
            obs = None
            for action in actions:
                obs = device.step(action)
                if not device.live:
                    break
            if obs is None:
                continue
            if obs.kind is ObservationKind.CRASHED:
                crashes.add(screen_id, f"app crashed: {obs.message}")
            elif obs.snapshot is not None and obs.snapshot.activity_name not in seen:
                seen.add(obs.snapshot.activity_name)
                queue.append(path + actions)
    return TestReport(
        app=app.name,
        mode="scenarios",
        faults=tuple(sorted(app.faults)),
        entries=tuple(entries),
        findings=tuple(findings),
        crashes=crashes.records(),
        duration_ms=device.clock_ms,
        budget_exhausted=exhausted,
        wall_clock_s=time.perf_counter() - started,
    )


def explore_suite(apps: Sequence[SimApp], model: KStarModel, config: RunConfig | None = None) -> list[TestReport]:
    cfg = config or RunConfig()
    lex = cfg.lexicon()
    return [explore_and_test(app, model, cfg, lex) for app in apps]
