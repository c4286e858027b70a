"""Load and validate app-definition documents (JSON, see docs/formats.md)."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from screentest.activity import ActivityType
from screentest.hierarchy import Rect, ScrollOrientation, is_edit_text_class
from screentest.simdevice.expr import TRUE, Expr, ExprError, check_types, parse_expr
from screentest.simdevice.model import (
    ActionKind,
    AutoAdvance,
    CrashSpec,
    Effect,
    EffectKind,
    ElementTemplate,
    FaultSpec,
    Mutation,
    MutationOp,
    ScreenDef,
    SimApp,
    TransitionRule,
)

APP_SCHEMA_VERSION = 1
BUNDLED_APPS = ("k9replica", "crimetalk_replica", "kitchensink")


class AppDefinitionError(ValueError):
    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


def _get(obj: dict, key: str, kind: type | tuple, path: str, default: Any = ...) -> Any:
    if key not in obj:
        if default is ...:
            raise AppDefinitionError("missing required field", f"{path}.{key}")
        return default
    value = obj[key]
    if isinstance(value, bool) and kind is int:
        raise AppDefinitionError("expected int", f"{path}.{key}")
    if not isinstance(value, kind):
        raise AppDefinitionError(f"expected {getattr(kind, '__name__', kind)}", f"{path}.{key}")
    return value


def _expr(raw: Any, path: str) -> Expr:
    try:
        return parse_expr(raw, path)
    except ExprError as exc:
        raise AppDefinitionError(str(exc).split(": ", 1)[-1], exc.path) from None


def _element(raw: Any, path: str) -> ElementTemplate:
    if not isinstance(raw, dict):
        raise AppDefinitionError("expected an object", path)
    bounds = _get(raw, "bounds", list, path)
    try:
        rect = Rect(*bounds)
    except (TypeError, ValueError) as exc:
        raise AppDefinitionError(f"bad bounds: {exc}", f"{path}.bounds") from None
    orientation = raw.get("orientation")
    if orientation is not None:
        try:
            orientation = ScrollOrientation(orientation)
        except ValueError:
            raise AppDefinitionError(f"unknown orientation {orientation!r}", f"{path}.orientation") from None
    variants = tuple(
        (_expr(v.get("when"), f"{path}.text_variants[{i}].when"), str(v.get("text", "")))
        for i, v in enumerate(_get(raw, "text_variants", list, path, []))
    )
    return ElementTemplate(
        element_id=_get(raw, "id", str, path),
        widget_class=_get(raw, "class", str, path),
        bounds=rect,
        resource_id=_get(raw, "resource_id", str, path, ""),
        text=_get(raw, "text", str, path, ""),
        text_variants=variants,
        clickable=_get(raw, "clickable", bool, path, False),
        long_clickable=_get(raw, "long_clickable", bool, path, False),
        scrollable=_get(raw, "scrollable", bool, path, False),
        editable=_get(raw, "editable", bool, path, None),
        orientation=orientation,
        decorative=_get(raw, "decorative", bool, path, False),
        visible_if=_expr(raw["visible_if"], f"{path}.visible_if") if "visible_if" in raw else None,
        children=tuple(
            _element(c, f"{path}.children[{i}]")
            for i, c in enumerate(_get(raw, "children", list, path, []))
        ),
    )


def _effect(raw: Any, path: str) -> Effect:
    if not isinstance(raw, dict):
        raise AppDefinitionError("expected an object", path)
    assignments = tuple(
        (var, _expr(val, f"{path}.set.{var}"))
        for var, val in _get(raw, "set", dict, path, {}).items()
    )
    clear = tuple(_get(raw, "clear", list, path, []))
    kinds = [k for k in ("goto", "back", "exit", "crash", "noop") if k in raw]
    if len(kinds) > 1:
        raise AppDefinitionError(f"conflicting effect kinds {kinds}", path)
    kind = kinds[0] if kinds else ("set" if assignments or clear else "noop")
    if kind == "goto":
        return Effect(
            EffectKind.GOTO,
            target=_get(raw, "goto", str, path),
            replace=_get(raw, "replace", bool, path, False),
            assignments=assignments,
            clear=clear,
        )
    if kind == "crash":
        return Effect(EffectKind.CRASH, message=_get(raw, "crash", str, path))
    return Effect(EffectKind(kind), assignments=assignments, clear=clear)


def _action(raw: Any, path: str) -> ActionKind:
    try:
        return ActionKind(raw)
    except ValueError:
        raise AppDefinitionError(f"unknown action {raw!r}", path) from None


def _rule(raw: Any, path: str) -> TransitionRule:
    if not isinstance(raw, dict):
        raise AppDefinitionError("expected an object", path)
    action = _action(_get(raw, "on", str, path), f"{path}.on")
    element = _get(raw, "element", str, path, None)
    if element is None and action is not ActionKind.BACK:
        raise AppDefinitionError(f"{action.value} rules need an element", f"{path}.element")
    return TransitionRule(
        rule_id=_get(raw, "id", str, path),
        action=action,
        element=element,
        guard=_expr(raw["guard"], f"{path}.guard") if "guard" in raw else TRUE,
        effect=_effect(_get(raw, "effect", dict, path, {"noop": True}), f"{path}.effect"),
    )


def _screen(raw: Any, path: str) -> ScreenDef:
    if not isinstance(raw, dict):
        raise AppDefinitionError("expected an object", path)
    try:
        true_type = ActivityType.parse(_get(raw, "type", str, path))
    except ValueError as exc:
        raise AppDefinitionError(str(exc), f"{path}.type") from None
    auto = raw.get("auto_advance")
    auto_advance = None
    if auto is not None:
        auto_advance = AutoAdvance(
            _get(auto, "delay_ms", int, f"{path}.auto_advance"),
            _get(auto, "target", str, f"{path}.auto_advance"),
        )
    return ScreenDef(
        screen_id=_get(raw, "id", str, path),
        true_type=true_type,
        root=_element(_get(raw, "root", dict, path), f"{path}.root"),
        rules=tuple(
            _rule(r, f"{path}.rules[{i}]") for i, r in enumerate(_get(raw, "rules", list, path, []))
        ),
        auto_advance=auto_advance,
    )


def _mutation(raw: Any, path: str) -> Mutation:
    try:
        op = MutationOp(_get(raw, "op", str, path))
    except ValueError:
        raise AppDefinitionError(f"unknown mutation op {raw.get('op')!r}", f"{path}.op") from None
    return Mutation(
        op=op,
        screen=_get(raw, "screen", str, path),
        rule=_get(raw, "rule", str, path, None),
        element=_get(raw, "element", str, path, None),
        effect=_effect(raw["effect"], f"{path}.effect") if "effect" in raw else None,
        guard=_expr(raw["guard"], f"{path}.guard") if "guard" in raw else None,
    )


def _registers(screen: ScreenDef) -> set[str]:
    return {
        t.element_id
        for t in screen.root.iter_preorder()
        if (t.editable if t.editable is not None else is_edit_text_class(t.widget_class))
    }


def _check_expr(e: Expr, state_types: dict, regs: set[str], path: str, want: type | None) -> None:
    try:
        got = check_types(e, state_types, regs, path)
    except ExprError as exc:
        raise AppDefinitionError(str(exc).split(": ", 1)[-1], exc.path) from None
    if want is not None and got is not want:
        raise AppDefinitionError(f"expected a {want.__name__} expression, got {got.__name__}", path)


def _validate_effect(eff: Effect, screens: dict, state_types: dict, regs: set[str], path: str) -> None:
    if eff.kind is EffectKind.GOTO and eff.target not in screens:
        raise AppDefinitionError(f"transition to unknown screen {eff.target!r}", f"{path}.goto")
    for var, val in eff.assignments:
        if var not in state_types:
            raise AppDefinitionError(f"assignment to unknown state variable {var!r}", f"{path}.set.{var}")
        _check_expr(val, state_types, regs, f"{path}.set.{var}", state_types[var])
    for reg in eff.clear:
        if reg not in regs:
            raise AppDefinitionError(f"{reg!r} is not an editable element", f"{path}.clear")


def _validate(app: SimApp, raw_faults_path: str) -> None:
    state_types = {k: type(v) for k, v in app.state.items()}
    screens = dict(app.screens)
    if app.initial_screen not in screens:
        raise AppDefinitionError(f"unknown screen {app.initial_screen!r}", "initial_screen")
    if app.monkey_start is not None and app.monkey_start not in screens:
        raise AppDefinitionError(f"unknown screen {app.monkey_start!r}", "monkey_start")
    for si, (sid, sdef) in enumerate(screens.items()):
        spath = f"screens[{si}]"
        ids = [t.element_id for t in sdef.root.iter_preorder()]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise AppDefinitionError(f"duplicate element_id {dupes[0]!r}", f"{spath}.root")
        regs = _registers(sdef)
        for t in sdef.root.iter_preorder():
            if t.visible_if is not None:
                _check_expr(t.visible_if, state_types, regs, f"{spath}.{t.element_id}.visible_if", bool)
            for g, _ in t.text_variants:
                _check_expr(g, state_types, regs, f"{spath}.{t.element_id}.text_variants", bool)
        if sdef.auto_advance and sdef.auto_advance.target not in screens:
            raise AppDefinitionError(
                f"auto_advance to unknown screen {sdef.auto_advance.target!r}", f"{spath}.auto_advance"
            )
        rule_ids = [r.rule_id for r in sdef.rules]
        if len(set(rule_ids)) != len(rule_ids):
            raise AppDefinitionError("duplicate rule id", f"{spath}.rules")
        for ri, rule in enumerate(sdef.rules):
            rpath = f"{spath}.rules[{ri}]"
            if rule.element is not None and rule.element not in ids:
                raise AppDefinitionError(f"unknown element {rule.element!r}", f"{rpath}.element")
            _check_expr(rule.guard, state_types, regs, f"{rpath}.guard", bool)
            _validate_effect(rule.effect, screens, state_types, regs, f"{rpath}.effect")
    for fi, (fid, spec) in enumerate(app.fault_catalog.items()):
        for mi, m in enumerate(spec.mutations):
            mpath = f"{raw_faults_path}[{fi}].mutations[{mi}]"
            if m.screen not in screens:
                raise AppDefinitionError(f"unknown fault target screen {m.screen!r}", f"{mpath}.screen")
            sdef = screens[m.screen]
            regs = _registers(sdef)
            if m.op in (MutationOp.REPLACE_EFFECT, MutationOp.REPLACE_GUARD,
                        MutationOp.INVERT_GUARD, MutationOp.REMOVE_RULE):
                if m.rule not in {r.rule_id for r in sdef.rules}:
                    raise AppDefinitionError(f"unknown fault target rule {m.rule!r}", f"{mpath}.rule")
            if m.op is MutationOp.REPLACE_EFFECT:
                if m.effect is None:
                    raise AppDefinitionError("replace_effect needs an effect", mpath)
                _validate_effect(m.effect, screens, state_types, regs, f"{mpath}.effect")
            if m.op is MutationOp.REPLACE_GUARD:
                if m.guard is None:
                    raise AppDefinitionError("replace_guard needs a guard", mpath)
                _check_expr(m.guard, state_types, regs, f"{mpath}.guard", bool)
            if m.op is MutationOp.REMOVE_ELEMENT:
                if m.element not in sdef.elements() or m.element == sdef.root.element_id:
                    raise AppDefinitionError(f"unknown fault target element {m.element!r}", f"{mpath}.element")


def app_from_dict(doc: Any) -> SimApp:
    if not isinstance(doc, dict):
        raise AppDefinitionError("definition must be an object", "$")
    version = doc.get("schema_version")
    if version != APP_SCHEMA_VERSION:
        raise AppDefinitionError(f"unsupported schema_version {version!r}", "schema_version")
    raw_screens = _get(doc, "screens", list, "$")
    if not raw_screens:
        raise AppDefinitionError("at least one screen is required", "screens")
    screens: dict[str, ScreenDef] = {}
    for i, raw in enumerate(raw_screens):
        sdef = _screen(raw, f"screens[{i}]")
        if sdef.screen_id in screens:
            raise AppDefinitionError(f"duplicate screen id {sdef.screen_id!r}", f"screens[{i}].id")
        screens[sdef.screen_id] = sdef

    crashes = []
    for i, raw in enumerate(_get(doc, "crashes", list, "$", [])):
        path = f"crashes[{i}]"
        spec = CrashSpec(
            crash_id=_get(raw, "id", str, path),
            screen=_get(raw, "screen", str, path),
            element=_get(raw, "element", str, path),
            action=_action(_get(raw, "action", str, path), f"{path}.action"),
            message=_get(raw, "message", str, path),
        )
        if spec.screen not in screens:
            raise AppDefinitionError(f"unknown screen {spec.screen!r}", f"{path}.screen")
        sdef = screens[spec.screen]
        if spec.element not in sdef.elements():
            raise AppDefinitionError(f"unknown element {spec.element!r}", f"{path}.element")
        # crash handlers take precedence over the screen's own rules
        crash_rule = TransitionRule(
            spec.crash_id, spec.action, spec.element, TRUE, Effect(EffectKind.CRASH, message=spec.message)
        )
        screens[spec.screen] = ScreenDef(
            sdef.screen_id, sdef.true_type, sdef.root, (crash_rule,) + sdef.rules, sdef.auto_advance
        )
        crashes.append(spec)

    name = _get(doc, "name", str, "$")
    faults: dict[str, FaultSpec] = {}
    for i, raw in enumerate(_get(doc, "faults", list, "$", [])):
        path = f"faults[{i}]"
        spec = FaultSpec(
            fault_id=_get(raw, "id", str, path),
            description=_get(raw, "description", str, path),
            mutations=tuple(
                _mutation(m, f"{path}.mutations[{j}]")
                for j, m in enumerate(_get(raw, "mutations", list, path))
            ),
            expected_check=_get(raw, "detected_by", str, path, ""),
            app=name,
        )
        if spec.fault_id in faults:
            raise AppDefinitionError(f"duplicate fault id {spec.fault_id!r}", f"{path}.id")
        faults[spec.fault_id] = spec

    account = doc.get("test_account")
    app = SimApp(
        name=name,
        package=_get(doc, "package", str, "$"),
        screens=screens,
        initial_screen=_get(doc, "initial_screen", str, "$"),
        state=dict(_get(doc, "state", dict, "$", {})),
        fault_catalog=faults,
        crashes=tuple(crashes),
        test_account=(account["username"], account["password"]) if account else None,
        monkey_start=_get(doc, "monkey_start", str, "$", None),
    )
    for var, val in app.state.items():
        if not isinstance(val, (str, int, bool)):
            raise AppDefinitionError("state values must be str, int or bool", f"state.{var}")
    _validate(app, "faults")
    return app


def load_app(text: str) -> SimApp:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AppDefinitionError(f"malformed JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return app_from_dict(doc)


def bundled_definition(name: str) -> dict:
    if name not in BUNDLED_APPS:
        raise KeyError(f"no bundled app {name!r} (available: {', '.join(BUNDLED_APPS)})")
    text = resources.files("screentest.simdevice.apps").joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


def bundled_app(name: str) -> SimApp:
    return app_from_dict(bundled_definition(name))


def load_app_source(source: str) -> SimApp:
    """A bundled app name or a path to a definition file."""
    if source in BUNDLED_APPS:
        return bundled_app(source)
    with open(source, encoding="utf-8") as fh:
        return load_app(fh.read())


def fault_catalog() -> list[FaultSpec]:
    """Every fault shipped with the bundled apps, in app then declaration order."""
    out: list[FaultSpec] = []
    for name in BUNDLED_APPS:
        out.extend(bundled_app(name).fault_catalog.values())
    return out
