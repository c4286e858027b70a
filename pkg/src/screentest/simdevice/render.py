"""Render a screen definition into a ScreenSnapshot on the virtual display."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Any, Mapping

from screentest.hierarchy import (
    Rect,
    ScreenSnapshot,
    ScrollOrientation,
    UiElement,
    is_edit_text_class,
    is_horizontal_class,
)
from screentest.simdevice.expr import evaluate
from screentest.simdevice.model import ElementTemplate, ScreenDef, SimApp

_PLACEHOLDER = re.compile(r"\{(\w+)\}")

DECORATION_CLASSES = ("android.widget.ImageView", "android.view.View", "android.widget.TextView")


@dataclass(frozen=True)
class Perturbation:
    """Seeded layout noise used when synthesising dataset instances."""

    rng: random.Random
    jitter_px: int
    drop_decorative: float = 0.25
    max_extra: int = 2


@dataclass(frozen=True)
class RenderedScreen:
    snapshot: ScreenSnapshot
    ids: tuple[str, ...]
    parents: tuple[int, ...]
    templates: tuple[ElementTemplate | None, ...]


def _fmt_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def format_text(template: str, state: Mapping[str, Any]) -> str:
    return _PLACEHOLDER.sub(
        lambda m: _fmt_value(state[m.group(1)]) if m.group(1) in state else m.group(0), template
    )


def is_editable(t: ElementTemplate) -> bool:
    return t.editable if t.editable is not None else is_edit_text_class(t.widget_class)


def render(
    app: SimApp,
    screen: ScreenDef,
    state: Mapping[str, Any],
    registers: Mapping[str, str],
    perturb: Perturbation | None = None,
) -> RenderedScreen:
    width, height = app.display
    ids: list[str] = []
    parents: list[int] = []
    templates: list[ElementTemplate | None] = []

    def resource_id(t: ElementTemplate) -> str:
        if not t.resource_id or ":" in t.resource_id:
            return t.resource_id
        return f"{app.package}:id/{t.resource_id}"

    def text_of(t: ElementTemplate) -> str:
        if is_editable(t) and registers.get(t.element_id):
            return registers[t.element_id]
        for guard, text in t.text_variants:
            if evaluate(guard, state, registers):
                return format_text(text, state)
        return format_text(t.text, state)

    def bounds_of(t: ElementTemplate, is_root: bool) -> Rect:
        b = t.bounds
        if perturb is None or is_root:
            return b
        dy = perturb.rng.randint(-perturb.jitter_px, perturb.jitter_px)
        y1 = min(max(b.y1 + dy, 0), height)
        y2 = min(max(b.y2 + dy, 0), height)
        return Rect(b.x1, y1, b.x2, y2)

    def build(t: ElementTemplate, parent: int) -> UiElement | None:
        if t.visible_if is not None and not evaluate(t.visible_if, state, registers):
            return None
        is_root = parent < 0
        if perturb is not None and not is_root and t.decorative:
            if perturb.rng.random() < perturb.drop_decorative:
                return None
        index = len(ids)
        ids.append(t.element_id)
        parents.append(parent)
        templates.append(t)
        bounds = bounds_of(t, is_root)
        children = [c for c in (build(child, index) for child in t.children) if c is not None]
        if is_root and perturb is not None:
            for k in range(perturb.rng.randint(0, perturb.max_extra)):
                top = perturb.rng.randint(0, height - 40)
                cls = perturb.rng.choice(DECORATION_CLASSES)
                h = perturb.rng.randint(40, 200)
                ids.append(f"__decoration_{k}")
                parents.append(index)
                templates.append(None)
                children.append(
                    UiElement(
                        widget_class=cls,
                        bounds=Rect(0, top, width, min(top + h, height)),
                        package=app.package,
                    )
                )
        if t.orientation is not None:
            orientation = t.orientation
        elif is_horizontal_class(t.widget_class):
            orientation = ScrollOrientation.HORIZONTAL
        else:
            orientation = ScrollOrientation.UNSPECIFIED
        return UiElement(
            widget_class=t.widget_class,
            bounds=bounds,
            resource_id=resource_id(t),
            package=app.package,
            text=text_of(t),
            clickable=t.clickable,
            long_clickable=t.long_clickable,
            scrollable=t.scrollable,
            editable=is_editable(t),
            scroll_orientation=orientation,
            children=tuple(children),
        )

    root = build(screen.root, -1)
    if root is None:
        raise ValueError(f"screen {screen.screen_id} root is hidden")
    snap = ScreenSnapshot(
        root=root,
        screen_width=width,
        screen_height=height,
        foreground_package=app.package,
        activity_name=screen.screen_id,
    )
    return RenderedScreen(snap, tuple(ids), tuple(parents), tuple(templates))
