"""Stratified k-fold cross-validation and the blend grid search."""

from __future__ import annotations

import random
from typing import Callable, Iterable, Sequence

from screentest.activity import ActivityType, LabeledDataset
from screentest.learn.baselines import knn_predict, majority_predict
from screentest.learn.kstar import DEFAULT_BLEND, kstar_predict, kstar_train

Predictor = Callable[[Sequence[float]], ActivityType]
#: Trains on a dataset and returns a function from feature row to label.
ClassifierSpec = Callable[[LabeledDataset], Predictor]

DEFAULT_BLEND_GRID = (0.0, 20.0, 40.0, 60.0, 80.0, 100.0)


def kstar_spec(blend: float = DEFAULT_BLEND) -> ClassifierSpec:
    def fit(train: LabeledDataset) -> Predictor:
        model = kstar_train(train, blend)
        return lambda q: kstar_predict(model, q)[0]

    return fit


def knn_spec(k: int = 1) -> ClassifierSpec:
    def fit(train: LabeledDataset) -> Predictor:
        kk = min(k, len(train))
        return lambda q: knn_predict(train, q, kk)

    return fit


def majority_spec() -> ClassifierSpec:
    def fit(train: LabeledDataset) -> Predictor:
        label = majority_predict(train)
        return lambda q: label

    return fit


def stratified_folds(labels: Sequence[ActivityType], folds: int, seed: int) -> list[int]:
    """Fold index per instance.

    Instances are shuffled with ``seed``; each class is then dealt round-robin
    across folds, classes taken in activity-type order and the dealing
    position carried over between classes.
    """
    n = len(labels)
    if folds < 2:
        raise ValueError(f"folds must be at least 2, got {folds}")
    if folds > n:
        raise ValueError(f"cannot build {folds} folds from {n} instances")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    assignment = [0] * n
    pos = 0
    for cls in ActivityType:
        for i in order:
            if labels[i] is cls:
                assignment[i] = pos % folds
                pos += 1
    return assignment


def cross_validate(
    dataset: LabeledDataset, classifier: ClassifierSpec, folds: int = 10, seed: int = 0
) -> float:
    assignment = stratified_folds(dataset.labels, folds, seed)
    correct = 0
    for fold in range(folds):
        test = [i for i, f in enumerate(assignment) if f == fold]
        if not test:
            continue
        train = dataset.subset(i for i, f in enumerate(assignment) if f != fold)
        predict = classifier(train)
        correct += sum(predict(dataset.features[i]) is dataset.labels[i] for i in test)
    return correct / len(dataset)


def grid_search_blend(
    dataset: LabeledDataset,
    candidates: Iterable[float] = DEFAULT_BLEND_GRID,
    folds: int = 10,
    seed: int = 0,
) -> tuple[float, dict[float, float]]:
    """Best blend by CV accuracy (smallest blend wins ties) and the full table."""
    cands = sorted(float(c) for c in candidates)
    if not cands:
        raise ValueError("no blend candidates given")
    table = {b: cross_validate(dataset, kstar_spec(b), folds, seed) for b in cands}
    best = max(table.values())
    return next(b for b in cands if table[b] == best), table
