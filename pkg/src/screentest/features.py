"""The 15-number screen summary and the dataset CSV format.

Layout of the vector: counts for the 4 element groups x 3 screen bands
(group-major), then the total element count, the long-clickable count and
a 0/1 navigation-drawer flag.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from screentest.activity import N_FEATURES, ActivityType, DatasetError, LabeledDataset
from screentest.hierarchy import (
    ScreenSnapshot,
    ScrollOrientation,
    UiElement,
    flatten,
    is_edit_text_class,
    is_horizontal_class,
)
from screentest.lexicon import LexiconConfig, matches

TOP_FRACTION = 0.2
BOTTOM_FRACTION = 0.8
DRAWER_CLASS_TOKEN = "DrawerLayout"


class ScreenRegion(enum.Enum):
    TOP = "top"
    MIDDLE = "middle"
    BOTTOM = "bottom"


class ElementGroup(enum.Enum):
    CLICKABLE = "clickable"
    HORIZONTAL_SWIPEABLE = "hswipe"
    VERTICAL_SWIPEABLE = "vswipe"
    TEXT_FIELD = "textfield"


FEATURE_NAMES: tuple[str, ...] = tuple(
    f"{g.value}_{r.value}" for g in ElementGroup for r in ScreenRegion
) + ("elements", "long_clickable", "drawer")

FEATURE_DESCRIPTIONS: dict[str, str] = {
    **{
        f"{g.value}_{r.value}": f"{label} elements in the {r.value} band"
        for g, label in (
            (ElementGroup.CLICKABLE, "clickable"),
            (ElementGroup.HORIZONTAL_SWIPEABLE, "horizontally swipeable"),
            (ElementGroup.VERTICAL_SWIPEABLE, "vertically swipeable"),
            (ElementGroup.TEXT_FIELD, "text field"),
        )
        for r in ScreenRegion
    },
    "elements": "all elements",
    "long_clickable": "long-clickable elements",
    "drawer": "navigation drawer present",
}


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} values, got {len(self.values)}")
        if any(v < 0 for v in self.values):
            raise ValueError("feature counts must be non-negative")
        if self.values[14] not in (0, 1):
            raise ValueError("drawer flag must be 0 or 1")

    def cell(self, group: ElementGroup, region: ScreenRegion) -> int:
        return self.values[_cell_index(group, region)]

    @property
    def element_count(self) -> int:
        return self.values[12]

    @property
    def long_clickable_count(self) -> int:
        return self.values[13]

    @property
    def has_drawer(self) -> bool:
        return self.values[14] == 1

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.values)


_GROUPS = list(ElementGroup)
_REGIONS = list(ScreenRegion)


def _cell_index(group: ElementGroup, region: ScreenRegion) -> int:
    return _GROUPS.index(group) * 3 + _REGIONS.index(region)


def assign_region(element: UiElement, screen_height: int) -> ScreenRegion:
    """Band containing the element's vertical centre (20% / 60% / 20%)."""
    if screen_height <= 0:
        raise ValueError("screen_height must be positive")
    c = (element.bounds.y1 + element.bounds.y2) / 2
    if c < TOP_FRACTION * screen_height:
        return ScreenRegion.TOP
    if c < BOTTOM_FRACTION * screen_height:
        return ScreenRegion.MIDDLE
    return ScreenRegion.BOTTOM


def classify_element_groups(element: UiElement) -> set[ElementGroup]:
    groups = set()
    if element.clickable:
        groups.add(ElementGroup.CLICKABLE)
    if element.editable or is_edit_text_class(element.widget_class):
        groups.add(ElementGroup.TEXT_FIELD)
    if element.scrollable:
        horizontal = element.scroll_orientation is ScrollOrientation.HORIZONTAL or (
            is_horizontal_class(element.widget_class)
        )
        groups.add(
            ElementGroup.HORIZONTAL_SWIPEABLE if horizontal else ElementGroup.VERTICAL_SWIPEABLE
        )
    return groups


def detect_drawer(snapshot: ScreenSnapshot, lexicon: LexiconConfig) -> bool:
    words = lexicon["drawer"]
    for el in flatten(snapshot):
        if DRAWER_CLASS_TOKEN in el.widget_class:
            return True
        if el.clickable and matches(el.resource_id, words):
            return True
    return False


def extract_features(snapshot: ScreenSnapshot, lexicon: LexiconConfig) -> FeatureVector:
    counts = [0] * N_FEATURES
    elements = flatten(snapshot)
    for el in elements:
        region = assign_region(el, snapshot.screen_height)
        for group in classify_element_groups(el):
            counts[_cell_index(group, region)] += 1
        if el.long_clickable:
            counts[13] += 1
    counts[12] = len(elements)
    counts[14] = int(detect_drawer(snapshot, lexicon))
    return FeatureVector(tuple(counts))


# --- dataset CSV -----------------------------------------------------------

CSV_HEADER = list(FEATURE_NAMES) + ["label"]


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def dataset_to_csv(rows: Iterable[tuple[Sequence[float], ActivityType]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for vec, label in rows:
        if len(vec) != N_FEATURES:
            raise DatasetError(f"expected {N_FEATURES} features, got {len(vec)}")
        writer.writerow([_fmt(v) for v in vec] + [label.value])
    return buf.getvalue()


def write_dataset(rows: Iterable[tuple[Sequence[float] | FeatureVector, ActivityType]], path: str) -> None:
    plain = [(r.values if isinstance(r, FeatureVector) else r, label) for r, label in rows]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dataset_to_csv(plain))


def dataset_from_csv(text: str) -> LabeledDataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("dataset file is empty (header row required)") from None
    if len(header) != N_FEATURES + 1:
        raise DatasetError(f"row 1: header has {len(header)} columns, expected {N_FEATURES + 1}")
    feats, labels = [], []
    for rownum, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != N_FEATURES + 1:
            raise DatasetError(f"row {rownum}: {len(row)} columns, expected {N_FEATURES + 1}")
        try:
            vec = tuple(float(v) for v in row[:N_FEATURES])
        except ValueError as exc:
            raise DatasetError(f"row {rownum}: {exc}") from None
        try:
            label = ActivityType.parse(row[N_FEATURES])
        except ValueError as exc:
            raise DatasetError(f"row {rownum}: {exc}") from None
        feats.append(vec)
        labels.append(label)
    return LabeledDataset(tuple(feats), tuple(labels))


def read_dataset(path: str) -> LabeledDataset:
    with open(path, encoding="utf-8", newline="") as fh:
        return dataset_from_csv(fh.read())
