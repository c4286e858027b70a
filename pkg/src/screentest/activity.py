"""Activity types and the labeled dataset container shared by features and learn."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

N_FEATURES = 15


class ActivityType(enum.Enum):
    """The seven screen categories. Declaration order is the tie-break order."""

    SPLASH = "Splash"
    ADVERTISEMENT = "Advertisement"
    LOGIN = "Login"
    PORTAL = "Portal"
    MAIL = "Mail"
    BROWSER = "Browser"
    TODO_LIST = "TodoList"

    @classmethod
    def parse(cls, name: str) -> "ActivityType":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown activity type {name!r} (expected one of {valid})") from None

    @property
    def rank(self) -> int:
        return _ORDER[self]

    def __str__(self) -> str:
        return self.value


_ORDER = {t: i for i, t in enumerate(ActivityType)}


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledDataset:
    """Feature rows with one activity label each."""

    features: tuple[tuple[float, ...], ...]
    labels: tuple[ActivityType, ...]

    def __post_init__(self) -> None:
        if not self.features:
            raise DatasetError("dataset is empty")
        if len(self.features) != len(self.labels):
            raise DatasetError(
                f"{len(self.features)} feature rows but {len(self.labels)} labels"
            )
        for i, row in enumerate(self.features):
            if len(row) != N_FEATURES:
                raise DatasetError(f"row {i}: expected {N_FEATURES} features, got {len(row)}")
            if not all(math.isfinite(v) for v in row):
                raise DatasetError(f"row {i}: non-finite feature value")

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[Sequence[float], ActivityType]]) -> "LabeledDataset":
        feats, labels = [], []
        for vec, label in rows:
            feats.append(tuple(float(v) for v in vec))
            labels.append(label)
        return cls(tuple(feats), tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def subset(self, indices: Iterable[int]) -> "LabeledDataset":
        idx = list(indices)
        return LabeledDataset(
            tuple(self.features[i] for i in idx), tuple(self.labels[i] for i in idx)
        )

    def classes(self) -> list[ActivityType]:
        """Distinct labels in declaration order."""
        present = set(self.labels)
        return [t for t in ActivityType if t in present]
