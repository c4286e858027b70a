"""Information gain of numeric features after MDL discretisation.

Each feature is cut recursively at the boundary minimising class entropy;
a cut is kept only when its gain beats the minimum-description-length
threshold. The score is the class entropy minus the entropy conditioned on
the resulting bins, in bits.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

from screentest.activity import DatasetError, LabeledDataset


def entropy(labels: Sequence[Hashable]) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    return -sum((c / n) * math.log2(c / n) for c in Counter(labels).values())


def mdl_accepts(parent: Sequence[Hashable], left: Sequence[Hashable], right: Sequence[Hashable]) -> bool:
    n = len(parent)
    e, e1, e2 = entropy(parent), entropy(left), entropy(right)
    k, k1, k2 = len(set(parent)), len(set(left)), len(set(right))
    gain = e - (len(left) / n) * e1 - (len(right) / n) * e2
    delta = math.log2(3**k - 2) - (k * e - k1 * e1 - k2 * e2)
    return gain > (math.log2(n - 1) + delta) / n


def mdl_cut_points(values: Sequence[float], labels: Sequence[Hashable]) -> list[float]:
    """Accepted cut points, ascending. Cuts sit midway between distinct values."""
    pairs = sorted(zip(values, labels), key=lambda p: p[0])
    cuts: list[float] = []

    def split(lo: int, hi: int) -> None:
        seg = pairs[lo:hi]
        seg_labels = [lab for _, lab in seg]
        n = hi - lo
        if n < 2 or len(set(seg_labels)) < 2:
            return
        best = None
        for i in range(1, n):
            if seg[i - 1][0] == seg[i][0]:
                continue
            weighted = (i * entropy(seg_labels[:i]) + (n - i) * entropy(seg_labels[i:])) / n
            # strict < keeps the lowest cut on ties
            if best is None or weighted < best[0]:
                best = (weighted, i)
        if best is None:
            return
        i = best[1]
        if not mdl_accepts(seg_labels, seg_labels[:i], seg_labels[i:]):
            return
        split(lo, lo + i)
        cuts.append((seg[i - 1][0] + seg[i][0]) / 2)
        split(lo + i, hi)

    split(0, len(pairs))
    return sorted(cuts)


def info_gain(values: Sequence[float], labels: Sequence[Hashable]) -> float:
    cuts = mdl_cut_points(values, labels)
    n = len(labels)
    bins: dict[int, list[Hashable]] = {}
    for v, lab in zip(values, labels):
        bins.setdefault(sum(v > c for c in cuts), []).append(lab)
    conditional = sum(len(b) / n * entropy(b) for b in bins.values())
    return max(0.0, entropy(labels) - conditional)


@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple[tuple[int, float], ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def info_gain_rank(dataset: LabeledDataset) -> FeatureRanking:
    if len(set(dataset.labels)) < 2:
        raise DatasetError("information gain needs at least two distinct labels")
    labels = [lab.value for lab in dataset.labels]
    n_feat = len(dataset.features[0])
    scores = [
        (j, info_gain([row[j] for row in dataset.features], labels)) for j in range(n_feat)
    ]
    scores.sort(key=lambda p: (-p[1], p[0]))
    return FeatureRanking(tuple(scores))
