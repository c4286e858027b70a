"""Seeded random-event baseline, in the style of Android's UI monkey."""

from __future__ import annotations

import bisect
import itertools
import random
import string
import time

from screentest.runner.config import RunConfig
from screentest.runner.report import CrashLog, ScreenEntry, TestReport
from screentest.simdevice.device import Device, DeviceAction, ObservationKind
from screentest.simdevice.model import SWIPES, ActionKind, SimApp

PRINTABLE = string.ascii_letters + string.digits + string.punctuation + " "
MAX_TEXT_LENGTH = 12


def monkey_run(app: SimApp, config: RunConfig | None = None) -> TestReport:
    """Fire ``monkey_event_count`` random events and record every crash.

    The monkey asserts nothing about behaviour, so the report never holds
    logical findings. After a crash or an exit the app is relaunched on the
    same start screen. Text goes to the focused element; with nothing
    focused the event is lost and only time passes.
    """
    cfg = config or RunConfig()
    rng = random.Random(cfg.monkey_seed)
    start = app.monkey_start or app.initial_screen
    started = time.perf_counter()
    device = Device(app, start_screen=start, action_cost_ms=cfg.monkey_event_cost_ms)
    width, height = app.display
    cumulative = list(itertools.accumulate(cfg.event_mix.weights()))
    crashes = CrashLog()
    visited: dict[str, None] = {start: None}

    for _ in range(cfg.monkey_event_count):
        if not device.live:
            device.restart(start)
        bucket = min(bisect.bisect_right(cumulative, rng.random() * cumulative[-1]), 4)
        x, y = rng.randrange(width), rng.randrange(height)
        if bucket == 0:
            action = DeviceAction(ActionKind.TAP, x=x, y=y)
        elif bucket == 1:
            action = DeviceAction(rng.choice(SWIPES), x=x, y=y)
        elif bucket == 2:
            action = DeviceAction(ActionKind.LONG_PRESS, x=x, y=y)
        elif bucket == 3:
            text = "".join(rng.choice(PRINTABLE) for _ in range(rng.randint(1, MAX_TEXT_LENGTH)))
            if device.focus is None:
                action = DeviceAction.wait(cfg.monkey_event_cost_ms)
            else:
                action = DeviceAction.on(ActionKind.TYPE_TEXT, device.focus, text)
        else:
            action = DeviceAction.back()
        screen = device.screen_id
        obs = device.step(action)
        if obs.kind is ObservationKind.CRASHED:
            crashes.add(screen, f"app crashed: {obs.message}")
        elif device.live:
            visited.setdefault(device.screen_id, None)

    entries = tuple(
        ScreenEntry(s, None, None, app.screens[s].true_type, None) for s in visited
    )
    return TestReport(
        app=app.name,
        mode="monkey",
        faults=tuple(sorted(app.faults)),
        entries=entries,
        findings=(),
        crashes=crashes.records(),
        duration_ms=device.clock_ms,
        events=cfg.monkey_event_count,
        wall_clock_s=time.perf_counter() - started,
    )
