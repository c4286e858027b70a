"""Reference classifiers: k-nearest neighbours and the majority label."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from screentest.activity import ActivityType, DatasetError, LabeledDataset


def _vote(labels: Sequence[ActivityType]) -> ActivityType:
    counts = Counter(labels)
    top = max(counts.values())
    return next(t for t in ActivityType if counts.get(t, 0) == top)


def majority_predict(dataset: LabeledDataset) -> ActivityType:
    if len(dataset) == 0:
        raise DatasetError("empty dataset")
    return _vote(dataset.labels)


def knn_predict(dataset: LabeledDataset, query: Sequence[float], k: int) -> ActivityType:
    """Majority among the ``k`` nearest rows by Euclidean distance.

    Equal distances keep instance order; equal votes fall back to the
    activity-type order.
    """
    n = len(dataset)
    if k < 1 or k > n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    x = np.asarray(dataset.features, dtype=float)
    d = np.sqrt(((x - np.asarray(query, dtype=float)) ** 2).sum(axis=1))
    nearest = np.argsort(d, kind="stable")[:k]
    return _vote([dataset.labels[i] for i in nearest])
