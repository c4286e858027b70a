"""Declarative simulated application: screens, guarded transitions, faults."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Any, Mapping

from screentest.activity import ActivityType
from screentest.hierarchy import Rect, ScrollOrientation
from screentest.simdevice.expr import TRUE, Expr

DISPLAY_WIDTH = 1080
DISPLAY_HEIGHT = 1920


class ActionKind(enum.Enum):
    TAP = "Tap"
    LONG_PRESS = "LongPress"
    TYPE_TEXT = "TypeText"
    SWIPE_LEFT = "SwipeLeft"
    SWIPE_RIGHT = "SwipeRight"
    SWIPE_UP = "SwipeUp"
    SWIPE_DOWN = "SwipeDown"
    BACK = "Back"
    WAIT = "Wait"


SWIPES = (ActionKind.SWIPE_LEFT, ActionKind.SWIPE_RIGHT, ActionKind.SWIPE_UP, ActionKind.SWIPE_DOWN)


class EffectKind(enum.Enum):
    GOTO = "goto"
    SET = "set"
    BACK = "back"
    EXIT = "exit"
    CRASH = "crash"
    NOOP = "noop"


@dataclass(frozen=True)
class Effect:
    kind: EffectKind
    target: str | None = None
    replace: bool = False
    assignments: tuple[tuple[str, Expr], ...] = ()
    clear: tuple[str, ...] = ()
    message: str = ""


NOOP = Effect(EffectKind.NOOP)


@dataclass(frozen=True)
class TransitionRule:
    rule_id: str
    action: ActionKind
    element: str | None
    guard: Expr = TRUE
    effect: Effect = NOOP


@dataclass(frozen=True)
class ElementTemplate:
    element_id: str
    widget_class: str
    bounds: Rect
    resource_id: str = ""
    text: str = ""
    text_variants: tuple[tuple[Expr, str], ...] = ()
    clickable: bool = False
    long_clickable: bool = False
    scrollable: bool = False
    editable: bool | None = None
    orientation: ScrollOrientation | None = None
    decorative: bool = False
    visible_if: Expr | None = None
    children: tuple["ElementTemplate", ...] = ()

    def iter_preorder(self):
        yield self
        for c in self.children:
            yield from c.iter_preorder()


@dataclass(frozen=True)
class AutoAdvance:
    delay_ms: int
    target: str


@dataclass(frozen=True)
class ScreenDef:
    screen_id: str
    true_type: ActivityType
    root: ElementTemplate
    rules: tuple[TransitionRule, ...] = ()
    auto_advance: AutoAdvance | None = None

    def elements(self) -> dict[str, ElementTemplate]:
        return {t.element_id: t for t in self.root.iter_preorder()}

    def rule(self, rule_id: str) -> TransitionRule:
        for r in self.rules:
            if r.rule_id == rule_id:
                return r
        raise KeyError(rule_id)


class MutationOp(enum.Enum):
    REPLACE_EFFECT = "replace_effect"
    REPLACE_GUARD = "replace_guard"
    INVERT_GUARD = "invert_guard"
    REMOVE_RULE = "remove_rule"
    DISABLE_AUTO_ADVANCE = "disable_auto_advance"
    REMOVE_ELEMENT = "remove_element"


@dataclass(frozen=True)
class Mutation:
    op: MutationOp
    screen: str
    rule: str | None = None
    element: str | None = None
    effect: Effect | None = None
    guard: Expr | None = None


@dataclass(frozen=True)
class FaultSpec:
    fault_id: str
    description: str
    mutations: tuple[Mutation, ...]
    expected_check: str = ""
    app: str = ""

    def touched_rules(self) -> set[tuple[str, str]]:
        return {(m.screen, m.rule) for m in self.mutations if m.rule is not None}


@dataclass(frozen=True)
class CrashSpec:
    crash_id: str
    screen: str
    element: str
    action: ActionKind
    message: str


def _remove_element(root: ElementTemplate, element_id: str) -> ElementTemplate:
    kept = tuple(_remove_element(c, element_id) for c in root.children if c.element_id != element_id)
    return dataclasses.replace(root, children=kept)


def apply_mutation(screen: ScreenDef, m: Mutation) -> ScreenDef:
    if m.op is MutationOp.DISABLE_AUTO_ADVANCE:
        return dataclasses.replace(screen, auto_advance=None)
    if m.op is MutationOp.REMOVE_ELEMENT:
        rules = tuple(r for r in screen.rules if r.element != m.element)
        return dataclasses.replace(screen, root=_remove_element(screen.root, m.element), rules=rules)
    rules = []
    for r in screen.rules:
        if r.rule_id != m.rule:
            rules.append(r)
        elif m.op is MutationOp.REPLACE_EFFECT:
            rules.append(dataclasses.replace(r, effect=m.effect))
        elif m.op is MutationOp.REPLACE_GUARD:
            rules.append(dataclasses.replace(r, guard=m.guard))
        elif m.op is MutationOp.INVERT_GUARD:
            rules.append(dataclasses.replace(r, guard=Expr("not", (r.guard,))))
        # REMOVE_RULE drops it
    return dataclasses.replace(screen, rules=tuple(rules))


@dataclass(frozen=True)
class SimApp:
    """An app definition plus the set of currently injected faults.

    ``screens`` always holds the pristine definition; :meth:`screen` returns
    the effective screen with active faults applied, so injecting and then
    reverting a fault gives back an equal app.
    """

    name: str
    package: str
    screens: Mapping[str, ScreenDef]
    initial_screen: str
    state: Mapping[str, Any]
    fault_catalog: Mapping[str, FaultSpec] = field(default_factory=dict)
    faults: frozenset[str] = frozenset()
    crashes: tuple[CrashSpec, ...] = ()
    test_account: tuple[str, str] | None = None
    monkey_start: str | None = None
    display: tuple[int, int] = (DISPLAY_WIDTH, DISPLAY_HEIGHT)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def screen(self, screen_id: str) -> ScreenDef:
        if screen_id not in self._cache:
            sdef = self.screens[screen_id]
            for fid, spec in self.fault_catalog.items():
                if fid in self.faults:
                    for m in spec.mutations:
                        if m.screen == screen_id:
                            sdef = apply_mutation(sdef, m)
            self._cache[screen_id] = sdef
        return self._cache[screen_id]

    def mutated_rules(self) -> set[tuple[str, str]]:
        out: set[tuple[str, str]] = set()
        for fid in self.faults:
            out |= self.fault_catalog[fid].touched_rules()
        return out


class UnknownFaultError(KeyError):
    pass


def inject_fault(app: SimApp, fault_id: str) -> SimApp:
    if fault_id not in app.fault_catalog:
        raise UnknownFaultError(f"{app.name} has no fault {fault_id!r}")
    return dataclasses.replace(app, faults=app.faults | {fault_id})


def revert_fault(app: SimApp, fault_id: str) -> SimApp:
    if fault_id not in app.fault_catalog:
        raise UnknownFaultError(f"{app.name} has no fault {fault_id!r}")
    return dataclasses.replace(app, faults=app.faults - {fault_id})


def inject_all(app: SimApp) -> SimApp:
    return dataclasses.replace(app, faults=frozenset(app.fault_catalog))
