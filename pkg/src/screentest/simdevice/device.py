"""A single-threaded simulated device running one SimApp."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from screentest.hierarchy import ScreenSnapshot, UiElement
from screentest.simdevice.expr import evaluate
from screentest.simdevice.model import SWIPES, ActionKind, Effect, EffectKind, SimApp
from screentest.simdevice.render import RenderedScreen, is_editable, render

DEFAULT_ACTION_COST_MS = 100
DEFAULT_LAUNCH_COST_MS = 1000


class DeviceError(RuntimeError):
    pass


class ObservationKind(enum.Enum):
    SCREEN_CHANGED = "ScreenChanged"
    NO_CHANGE = "NoChange"
    APP_EXITED = "AppExited"
    CRASHED = "Crashed"


@dataclass(frozen=True)
class Observation:
    kind: ObservationKind
    snapshot: ScreenSnapshot | None = None
    message: str = ""

    @property
    def changed(self) -> bool:
        return self.kind is ObservationKind.SCREEN_CHANGED


@dataclass(frozen=True)
class DeviceAction:
    """A user event. Targets are either a point on the display or an element id."""

    kind: ActionKind
    x: float | None = None
    y: float | None = None
    element_id: str | None = None
    text: str = ""
    duration_ms: int = 0

    @classmethod
    def at(cls, kind: ActionKind, element: UiElement, text: str = "") -> "DeviceAction":
        cx, cy = element.bounds.center
        return cls(kind, x=cx, y=cy, text=text)

    @classmethod
    def on(cls, kind: ActionKind, element_id: str, text: str = "") -> "DeviceAction":
        return cls(kind, element_id=element_id, text=text)

    @classmethod
    def back(cls) -> "DeviceAction":
        return cls(ActionKind.BACK)

    @classmethod
    def wait(cls, duration_ms: int) -> "DeviceAction":
        return cls(ActionKind.WAIT, duration_ms=duration_ms)


class Status(enum.Enum):
    LIVE = "live"
    EXITED = "exited"
    CRASHED = "crashed"


class Device:
    """Deterministic state machine over an app definition.

    The virtual clock advances by ``action_cost_ms`` per event and by
    ``launch_cost_ms`` per (re)launch; ``Wait`` advances it by up to its
    duration, stopping early when a splash screen auto-advances.
    """

    def __init__(
        self,
        app: SimApp,
        start_screen: str | None = None,
        action_cost_ms: int = DEFAULT_ACTION_COST_MS,
        launch_cost_ms: int = DEFAULT_LAUNCH_COST_MS,
    ) -> None:
        self.app = app
        self.action_cost_ms = action_cost_ms
        self.launch_cost_ms = launch_cost_ms
        self.clock_ms = 0
        self.launches = 0
        self.trace: list[tuple[str, str]] = []
        self._render_cache: dict[Any, RenderedScreen] = {}
        self.launch(start_screen)

    # -- lifecycle ---------------------------------------------------------

    def launch(self, screen_id: str | None = None) -> None:
        """Start a fresh process, optionally deep-linking to ``screen_id``."""
        target = screen_id or self.app.initial_screen
        if target not in self.app.screens:
            raise DeviceError(f"unknown screen {target!r}")
        self.clock_ms += self.launch_cost_ms
        self.launches += 1
        self.status = Status.LIVE
        self.crash_message = ""
        self.screen_id = target
        self.state: dict[str, Any] = dict(self.app.state)
        self.registers: dict[str, str] = {}
        self.focus: str | None = None
        self.stack: list[str] = []
        self.screen_elapsed_ms = 0

    restart = launch

    @property
    def live(self) -> bool:
        return self.status is Status.LIVE

    # -- rendering ---------------------------------------------------------

    def _rendered(self) -> RenderedScreen:
        key = (
            self.screen_id,
            tuple(sorted(self.state.items())),
            tuple(sorted((k, v) for k, v in self.registers.items() if v)),
        )
        hit = self._render_cache.get(key)
        if hit is None:
            hit = render(self.app, self.app.screen(self.screen_id), self.state, self.registers)
            self._render_cache[key] = hit
        return hit

    def snapshot(self) -> ScreenSnapshot:
        if not self.live:
            raise DeviceError(f"app is {self.status.value}; no screen to capture")
        return self._rendered().snapshot

    # -- events ------------------------------------------------------------

    def _handles(self, element_id: str, kind: ActionKind, editable: bool) -> bool:
        if kind is ActionKind.TYPE_TEXT:
            return editable
        if kind is ActionKind.TAP and editable:
            return True
        return any(
            r.element == element_id and r.action is kind
            for r in self.app.screen(self.screen_id).rules
        )

    def _target(self, action: DeviceAction) -> str | None:
        rendered = self._rendered()
        flat = rendered.snapshot._flat
        if action.element_id is not None:
            if action.element_id not in rendered.ids:
                return None
            start = rendered.ids.index(action.element_id)
        else:
            if action.x is None or action.y is None:
                raise DeviceError(f"{action.kind.value} needs a point or an element id")
            start = -1
            for i, el in enumerate(flat):
                if el.bounds.contains(action.x, action.y):
                    start = i
            if start < 0:
                return None
        # bubble from the deepest element under the point to the first handler
        i = start
        while i >= 0:
            t = rendered.templates[i]
            if t is not None and self._handles(t.element_id, action.kind, is_editable(t)):
                return t.element_id
            i = rendered.parents[i]
        return None

    def _fire(self, element_id: str | None, kind: ActionKind) -> bool:
        for rule in self.app.screen(self.screen_id).rules:
            if rule.action is not kind or rule.element != element_id:
                continue
            if evaluate(rule.guard, self.state, self.registers):
                self.trace.append((self.screen_id, rule.rule_id))
                self._apply(rule.effect)
                return True
        return False

    def _enter(self, screen_id: str, push: bool) -> None:
        if push:
            self.stack.append(self.screen_id)
        self.screen_id = screen_id
        self.registers = {}
        self.focus = None
        self.screen_elapsed_ms = 0

    def _pop(self) -> None:
        if self.stack:
            self._enter(self.stack.pop(), push=False)
        else:
            self.status = Status.EXITED

    def _apply(self, effect: Effect) -> None:
        if effect.assignments:
            new = {var: evaluate(e, self.state, self.registers) for var, e in effect.assignments}
            self.state.update(new)
        for reg in effect.clear:
            self.registers.pop(reg, None)
        kind = effect.kind
        if kind is EffectKind.GOTO:
            self._enter(effect.target, push=not effect.replace)
        elif kind is EffectKind.BACK:
            self._pop()
        elif kind is EffectKind.EXIT:
            self.status = Status.EXITED
        elif kind is EffectKind.CRASH:
            self.status = Status.CRASHED
            self.crash_message = effect.message

    def _auto_advance(self) -> None:
        auto = self.app.screen(self.screen_id).auto_advance
        if auto is not None and self.screen_elapsed_ms >= auto.delay_ms:
            self._enter(auto.target, push=False)

    def step(self, action: DeviceAction) -> Observation:
        if not self.live:
            raise DeviceError(f"app is {self.status.value}; relaunch before sending events")
        before = self._rendered()
        kind = action.kind
        if kind is ActionKind.WAIT:
            auto = self.app.screen(self.screen_id).auto_advance
            remaining = None if auto is None else max(auto.delay_ms - self.screen_elapsed_ms, 0)
            if remaining is not None and remaining <= action.duration_ms:
                self.clock_ms += remaining
                self.screen_elapsed_ms += remaining
            else:
                self.clock_ms += action.duration_ms
                self.screen_elapsed_ms += action.duration_ms
        else:
            self.clock_ms += self.action_cost_ms
            self.screen_elapsed_ms += self.action_cost_ms
            if kind is ActionKind.BACK:
                if not self._fire(None, kind):
                    self._pop()
            else:
                target = self._target(action)
                if target is not None:
                    if kind is ActionKind.TYPE_TEXT:
                        self.registers[target] = action.text
                        self.focus = target
                    elif kind is ActionKind.TAP and target in self._editable_ids():
                        self.focus = target
                    self._fire(target, kind)
        if self.status is Status.CRASHED:
            return Observation(ObservationKind.CRASHED, message=self.crash_message)
        if self.status is Status.EXITED:
            return Observation(ObservationKind.APP_EXITED)
        self._auto_advance()
        after = self._rendered()
        if after.snapshot == before.snapshot:
            return Observation(ObservationKind.NO_CHANGE, after.snapshot)
        return Observation(ObservationKind.SCREEN_CHANGED, after.snapshot)

    def _editable_ids(self) -> set[str]:
        return {t.element_id for t in self._rendered().templates if t is not None and is_editable(t)}

    def focused_element(self) -> UiElement | None:
        if self.focus is None:
            return None
        rendered = self._rendered()
        if self.focus not in rendered.ids:
            return None
        return rendered.snapshot._flat[rendered.ids.index(self.focus)]


__all__ = [
    "SWIPES",
    "Device",
    "DeviceAction",
    "DeviceError",
    "Observation",
    "ObservationKind",
]
