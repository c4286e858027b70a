"""UI hierarchy model and parsers.

Two input formats are understood:

* uiautomator ``window_dump`` XML (nested ``node`` elements)
* the workbench's native JSON snapshot format (see ``docs/formats.md``)

Both produce the same immutable :class:`ScreenSnapshot` tree.
"""

from __future__ import annotations

import enum
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Any, Iterator
from xml.sax.saxutils import quoteattr

NATIVE_SCHEMA_VERSION = 1

_BOUNDS_RE = re.compile(r"^\[(\d+),(\d+)\]\[(\d+),(\d+)\]$")


class HierarchyParseError(ValueError):
    """Raised for malformed dumps; ``where`` names the offending location."""

    def __init__(self, message: str, where: str | None = None) -> None:
        super().__init__(message if where is None else f"{where}: {message}")
        self.where = where


class ScrollOrientation(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class Rect:
    x1: int
    y1: int
    x2: int
    y2: int

    def __post_init__(self) -> None:
        if min(self.x1, self.y1, self.x2, self.y2) < 0:
            raise ValueError(f"negative coordinate in {self}")
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise ValueError(f"inverted rectangle {self}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x1 + self.x2) / 2, (self.y1 + self.y2) / 2

    @property
    def area(self) -> int:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def contains(self, x: float, y: float) -> bool:
        return self.x1 <= x < self.x2 and self.y1 <= y < self.y2

    def to_bounds_string(self) -> str:
        return f"[{self.x1},{self.y1}][{self.x2},{self.y2}]"


def is_edit_text_class(widget_class: str) -> bool:
    return "EditText" in widget_class


def is_horizontal_class(widget_class: str) -> bool:
    return "Horizontal" in widget_class or "ViewPager" in widget_class


@dataclass(frozen=True)
class UiElement:
    widget_class: str
    bounds: Rect
    resource_id: str = ""
    package: str = ""
    text: str = ""
    clickable: bool = False
    long_clickable: bool = False
    scrollable: bool = False
    editable: bool = False
    scroll_orientation: ScrollOrientation = ScrollOrientation.UNSPECIFIED
    children: tuple["UiElement", ...] = ()

    def iter_preorder(self) -> Iterator["UiElement"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True)
class ScreenSnapshot:
    root: UiElement
    screen_width: int
    screen_height: int
    foreground_package: str = ""
    activity_name: str = ""
    _flat: tuple[UiElement, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.screen_width <= 0 or self.screen_height <= 0:
            raise ValueError(
                f"screen dimensions must be positive, got {self.screen_width}x{self.screen_height}"
            )
        b = self.root.bounds
        if b.x2 > self.screen_width or b.y2 > self.screen_height:
            raise ValueError(f"root bounds {b.to_bounds_string()} exceed the display")
        object.__setattr__(self, "_flat", tuple(self.root.iter_preorder()))


def flatten(snapshot: ScreenSnapshot) -> list[UiElement]:
    """Pre-order list of every element; the root comes first."""
    return list(snapshot._flat)


# --- uiautomator XML -------------------------------------------------------


def _parse_bounds(value: str, where: str) -> Rect:
    m = _BOUNDS_RE.match(value.strip())
    if not m:
        raise HierarchyParseError(f"malformed bounds attribute value {value!r}", where)
    try:
        return Rect(*(int(g) for g in m.groups()))
    except ValueError as exc:
        raise HierarchyParseError(f"invalid bounds attribute value {value!r}: {exc}", where) from None


def _xml_bool(node: ET.Element, attr: str, where: str) -> bool:
    value = node.get(attr, "false")
    if value == "true":
        return True
    if value == "false":
        return False
    raise HierarchyParseError(f"attribute {attr} must be 'true' or 'false', got {value!r}", where)


def _element_from_xml(node: ET.Element, where: str) -> UiElement:
    widget_class = node.get("class", "")
    children = tuple(
        _element_from_xml(child, f"{where}/node[{i}]")
        for i, child in enumerate(c for c in node if c.tag == "node")
    )
    scrollable = _xml_bool(node, "scrollable", where)
    orientation = (
        ScrollOrientation.HORIZONTAL
        if is_horizontal_class(widget_class)
        else ScrollOrientation.UNSPECIFIED
    )
    if "bounds" not in node.attrib:
        raise HierarchyParseError("missing bounds attribute", where)
    return UiElement(
        widget_class=widget_class,
        resource_id=node.get("resource-id", ""),
        package=node.get("package", ""),
        text=node.get("text", ""),
        bounds=_parse_bounds(node.get("bounds", ""), f"{where} bounds"),
        clickable=_xml_bool(node, "clickable", where),
        long_clickable=_xml_bool(node, "long-clickable", where),
        scrollable=scrollable,
        editable=is_edit_text_class(widget_class),
        scroll_orientation=orientation,
        children=children,
    )


def parse_uiautomator_xml(text: str) -> ScreenSnapshot:
    """Parse a uiautomator window dump.

    The display size is taken from the root node's bounds. ``editable`` and
    ``scroll_orientation`` are derived from the class name since the dump
    carries no such flags.
    """
    try:
        doc = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise HierarchyParseError(f"malformed XML at line {line}, column {col}: {exc}") from None
    if doc.tag == "node":
        root_node = doc
    else:
        nodes = [c for c in doc if c.tag == "node"]
        if not nodes:
            raise HierarchyParseError("dump contains no node elements", doc.tag)
        root_node = nodes[0]
    root = _element_from_xml(root_node, "node")
    try:
        return ScreenSnapshot(
            root=root,
            screen_width=root.bounds.x2,
            screen_height=root.bounds.y2,
            foreground_package=root.package,
            activity_name="",
        )
    except ValueError as exc:
        raise HierarchyParseError(str(exc), "node bounds") from None


def to_uiautomator_xml(snapshot: ScreenSnapshot) -> str:
    """Serialise in window_dump form. Derived flags are not written."""
    lines = ["<?xml version='1.0' encoding='UTF-8' standalone='yes' ?>", '<hierarchy rotation="0">']

    def emit(el: UiElement, depth: int) -> None:
        pad = "  " * depth
        attrs = (
            f"class={quoteattr(el.widget_class)} resource-id={quoteattr(el.resource_id)} "
            f"package={quoteattr(el.package)} text={quoteattr(el.text)} "
            f'bounds="{el.bounds.to_bounds_string()}" '
            f'clickable="{str(el.clickable).lower()}" '
            f'long-clickable="{str(el.long_clickable).lower()}" '
            f'scrollable="{str(el.scrollable).lower()}"'
        )
        if not el.children:
            lines.append(f"{pad}<node {attrs} />")
            return
        lines.append(f"{pad}<node {attrs}>")
        for child in el.children:
            emit(child, depth + 1)
        lines.append(f"{pad}</node>")

    emit(snapshot.root, 1)
    lines.append("</hierarchy>")
    return "\n".join(lines) + "\n"


# --- native JSON -----------------------------------------------------------


def _req(obj: dict, key: str, kind: type | tuple[type, ...], path: str) -> Any:
    if key not in obj:
        raise HierarchyParseError("missing required field", f"{path}.{key}" if path else key)
    value = obj[key]
    # bool is an int subclass; keep the two apart
    if (kind is int and isinstance(value, bool)) or not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise HierarchyParseError(f"expected {name}", f"{path}.{key}" if path else key)
    return value


def _opt_bool(obj: dict, key: str, default: bool, path: str) -> bool:
    if key not in obj:
        return default
    return _req(obj, key, bool, path)


def _opt_str(obj: dict, key: str, path: str) -> str:
    return _req(obj, key, str, path) if key in obj else ""


def _element_from_native(obj: Any, path: str) -> UiElement:
    if not isinstance(obj, dict):
        raise HierarchyParseError("expected an object", path)
    widget_class = _req(obj, "widget_class", str, path)
    raw_bounds = _req(obj, "bounds", list, path)
    if len(raw_bounds) != 4 or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in raw_bounds
    ):
        raise HierarchyParseError("expected [x1, y1, x2, y2] integers", f"{path}.bounds")
    try:
        bounds = Rect(*raw_bounds)
    except ValueError as exc:
        raise HierarchyParseError(str(exc), f"{path}.bounds") from None

    if "scroll_orientation" in obj:
        raw = _req(obj, "scroll_orientation", str, path)
        try:
            orientation = ScrollOrientation(raw)
        except ValueError:
            raise HierarchyParseError(
                f"unknown orientation {raw!r}", f"{path}.scroll_orientation"
            ) from None
    else:
        orientation = (
            ScrollOrientation.HORIZONTAL
            if is_horizontal_class(widget_class)
            else ScrollOrientation.UNSPECIFIED
        )
    raw_children = obj.get("children", [])
    if not isinstance(raw_children, list):
        raise HierarchyParseError("expected a list", f"{path}.children")
    return UiElement(
        widget_class=widget_class,
        resource_id=_opt_str(obj, "resource_id", path),
        package=_opt_str(obj, "package", path),
        text=_opt_str(obj, "text", path),
        bounds=bounds,
        clickable=_opt_bool(obj, "clickable", False, path),
        long_clickable=_opt_bool(obj, "long_clickable", False, path),
        scrollable=_opt_bool(obj, "scrollable", False, path),
        editable=_opt_bool(obj, "editable", is_edit_text_class(widget_class), path),
        scroll_orientation=orientation,
        children=tuple(
            _element_from_native(c, f"{path}.children[{i}]") for i, c in enumerate(raw_children)
        ),
    )


def snapshot_from_dict(doc: Any) -> ScreenSnapshot:
    if not isinstance(doc, dict):
        raise HierarchyParseError("snapshot document must be an object", "$")
    version = doc.get("schema_version", NATIVE_SCHEMA_VERSION)
    if version != NATIVE_SCHEMA_VERSION:
        raise HierarchyParseError(f"unsupported schema_version {version!r}", "schema_version")
    width = _req(doc, "screen_width", int, "")
    height = _req(doc, "screen_height", int, "")
    if width <= 0:
        raise HierarchyParseError("must be positive", "screen_width")
    if height <= 0:
        raise HierarchyParseError("must be positive", "screen_height")
    if doc.get("root") is None:
        raise HierarchyParseError("missing required field", "root")
    root = _element_from_native(doc["root"], "root")
    try:
        return ScreenSnapshot(
            root=root,
            screen_width=width,
            screen_height=height,
            foreground_package=_opt_str(doc, "foreground_package", ""),
            activity_name=_opt_str(doc, "activity_name", ""),
        )
    except ValueError as exc:
        raise HierarchyParseError(str(exc), "root.bounds") from None


def parse_snapshot_native(text: str) -> ScreenSnapshot:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HierarchyParseError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return snapshot_from_dict(doc)


def _element_to_dict(el: UiElement) -> dict[str, Any]:
    out: dict[str, Any] = {
        "widget_class": el.widget_class,
        "resource_id": el.resource_id,
        "package": el.package,
        "text": el.text,
        "bounds": [el.bounds.x1, el.bounds.y1, el.bounds.x2, el.bounds.y2],
        "clickable": el.clickable,
        "long_clickable": el.long_clickable,
        "scrollable": el.scrollable,
        "editable": el.editable,
        "scroll_orientation": el.scroll_orientation.value,
    }
    if el.children:
        out["children"] = [_element_to_dict(c) for c in el.children]
    return out


def snapshot_to_dict(snapshot: ScreenSnapshot) -> dict[str, Any]:
    return {
        "schema_version": NATIVE_SCHEMA_VERSION,
        "screen_width": snapshot.screen_width,
        "screen_height": snapshot.screen_height,
        "foreground_package": snapshot.foreground_package,
        "activity_name": snapshot.activity_name,
        "root": _element_to_dict(snapshot.root),
    }


def dump_snapshot_native(snapshot: ScreenSnapshot) -> str:
    """Deterministic native serialisation; derived flags are written explicitly."""
    return json.dumps(snapshot_to_dict(snapshot), indent=2) + "\n"


def load_snapshot(path: str, fmt: str | None = None) -> ScreenSnapshot:
    """Read a dump from disk. ``fmt`` is ``"xml"``, ``"native"`` or None to guess by suffix."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt is None:
        fmt = "native" if path.endswith(".json") else "xml"
    if fmt == "xml":
        return parse_uiautomator_xml(text)
    if fmt == "native":
        return parse_snapshot_native(text)
    raise ValueError(f"unknown snapshot format {fmt!r}")
