"""Shared types and the per-scenario session that drives a device."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

from screentest.activity import ActivityType
from screentest.features import ElementGroup, classify_element_groups
from screentest.hierarchy import ScreenSnapshot, UiElement, flatten
from screentest.lexicon import LexiconConfig, default_lexicon, resolve
from screentest.simdevice.device import Device, DeviceAction, Observation, ObservationKind
from screentest.simdevice.model import ActionKind

DEFAULT_SPLASH_TIMEOUT_MS = 10_000


class Severity(enum.Enum):
    LOGICAL = "Logical"
    CRASH = "Crash"


@dataclass(frozen=True)
class BugFinding:
    screen_id: str
    classified_type: ActivityType
    check_id: str
    description: str
    severity: Severity = Severity.LOGICAL

    def __post_init__(self) -> None:
        if not self.description:
            raise ValueError("finding description must be non-empty")


@dataclass(frozen=True)
class ScenarioOutcome:
    findings: tuple[BugFinding, ...]
    checks_run: int
    inconclusive: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        found = {f.check_id for f in self.findings}
        if found & {c for c, _ in self.inconclusive}:
            raise ValueError("a check cannot be both a finding and inconclusive")


@dataclass(frozen=True)
class Credentials:
    username: str
    password: str

    def __post_init__(self) -> None:
        if not self.username or not self.password:
            raise ValueError("credentials need a non-empty username and password")


Reset = Callable[[Device], None]


@dataclass
class ScenarioConfig:
    """What a scenario needs beyond the device.

    ``reset`` brings the device back to the screen under test; when absent,
    the device is relaunched directly on that screen.
    """

    credentials: Credentials | None = None
    lexicon: LexiconConfig = field(default_factory=default_lexicon)
    seed: int = 0
    splash_timeout_ms: int = DEFAULT_SPLASH_TIMEOUT_MS
    reset: Reset | None = None


class ScenarioAborted(Exception):
    pass


class Session:
    """Bookkeeping for one scenario run on one screen."""

    def __init__(self, device: Device, classified: ActivityType, config: ScenarioConfig) -> None:
        self.device = device
        self.classified = classified
        self.config = config
        self.home = device.snapshot()
        self.screen_id = self.home.activity_name
        self.findings: list[BugFinding] = []
        self.inconclusive: list[tuple[str, str]] = []
        self.checks_run = 0

    # -- outcome recording ---------------------------------------------------

    def begin(self, check_id: str) -> None:
        self.checks_run += 1

    def finding(self, check_id: str, description: str) -> None:
        self.findings.append(BugFinding(self.screen_id, self.classified, check_id, description))

    def skip(self, check_id: str, reason: str) -> None:
        self.inconclusive.append((check_id, reason))

    def outcome(self) -> ScenarioOutcome:
        return ScenarioOutcome(tuple(self.findings), max(self.checks_run, 1), tuple(self.inconclusive))

    # -- device access -------------------------------------------------------

    def reset(self) -> ScreenSnapshot:
        if self.config.reset is not None:
            self.config.reset(self.device)
        else:
            self.device.restart(self.screen_id)
        return self.device.snapshot()

    def step(self, action: DeviceAction) -> Observation:
        obs = self.device.step(action)
        if obs.kind is ObservationKind.CRASHED:
            self.findings.append(
                BugFinding(
                    self.screen_id,
                    self.classified,
                    "crash",
                    f"app crashed: {obs.message}",
                    Severity.CRASH,
                )
            )
            raise ScenarioAborted(obs.message)
        return obs

    def tap(self, el: UiElement) -> Observation:
        return self.step(DeviceAction.at(ActionKind.TAP, el))

    def type_into(self, el: UiElement, text: str) -> Observation:
        return self.step(DeviceAction.at(ActionKind.TYPE_TEXT, el, text))

    def current(self) -> ScreenSnapshot | None:
        return self.device.snapshot() if self.device.live else None

    # -- element lookup ------------------------------------------------------

    def find(self, snap: ScreenSnapshot, role: str, group: ElementGroup) -> list[UiElement]:
        if role not in self.config.lexicon:
            return []
        return resolve(snap, role, self.config.lexicon, require_group=group)


def in_group(el: UiElement, group: ElementGroup) -> bool:
    return group in classify_element_groups(el)


def elements_in(snap: ScreenSnapshot, group: ElementGroup) -> list[UiElement]:
    return [el for el in flatten(snap) if in_group(el, group)]


def clickable_descendants(el: UiElement) -> list[UiElement]:
    return [d for d in el.iter_preorder() if d is not el and d.clickable]


def same_element(snap: ScreenSnapshot, like: UiElement) -> UiElement | None:
    """Element in ``snap`` with the same resource id and class as ``like``."""
    for el in flatten(snap):
        if el.resource_id == like.resource_id and el.widget_class == like.widget_class:
            return el
    return None


def left_screen(before: ScreenSnapshot, obs: Observation) -> bool:
    """True when an action moved away from ``before``'s activity."""
    if obs.kind is ObservationKind.APP_EXITED:
        return True
    return obs.snapshot is not None and obs.snapshot.activity_name != before.activity_name
