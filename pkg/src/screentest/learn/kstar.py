"""Lazy instance-based classifier with a blend-calibrated distance kernel.

For every attribute the query's distance to each training instance is fed
through an exponential kernel ``exp(-d / s)``. The scale ``s`` is chosen per
attribute so that the effective number of instances carrying weight,
``(sum w)^2 / sum w^2``, equals ``n0 + blend/100 * (N - n0)`` where ``n0`` is
the number of instances at the minimal distance. Blend 0 therefore behaves
like a nearest-neighbour rule and blend 100 spreads weight over the whole
training set. Instance weights multiply across attributes and class scores
are the sums of the weights of their instances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from screentest.activity import N_FEATURES, ActivityType, DatasetError, LabeledDataset

DEFAULT_BLEND = 20.0
SCALE_TOLERANCE = 1e-6
_BISECTION_STEPS = 100
_LO_FACTOR = 1e-2  # exp(-100) on the nearest competing distance
_HI_FACTOR = 1e5

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class KStarModel:
    training: LabeledDataset
    blend: float = DEFAULT_BLEND
    _x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.blend <= 100.0 or math.isnan(self.blend):
            raise ValueError(f"blend must lie in [0, 100], got {self.blend}")
        object.__setattr__(self, "_x", np.asarray(self.training.features, dtype=float))


def kstar_train(dataset: LabeledDataset, blend: float = DEFAULT_BLEND) -> KStarModel:
    if len(dataset) == 0:
        raise DatasetError("cannot train on an empty dataset")
    return KStarModel(dataset, float(blend))


def effective_count(shifted: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """``(sum w)^2 / sum w^2`` per attribute row; infinite scale means uniform weights."""
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(scales)[:, None], 0.0, shifted / scales[:, None])
    return _participation(np.exp(-ratio))


def _participation(w: np.ndarray) -> np.ndarray:
    return w.sum(axis=1) ** 2 / (w * w).sum(axis=1)


def solve_scales(distances: np.ndarray, blend: float) -> np.ndarray:
    """Kernel scale per attribute for a ``(attributes, instances)`` distance matrix.

    Bisection runs in log space over a bracket that depends only on the
    distances, for a fixed number of steps, so the solved scale is a
    non-decreasing function of the blend.
    """
    d = np.sort(np.asarray(distances, dtype=float), axis=1)
    n = d.shape[1]
    shifted = d - d[:, :1]
    n0 = (shifted == 0.0).sum(axis=1)
    target = n0 + (blend / 100.0) * (n - n0)
    scales = np.full(d.shape[0], np.inf)
    live = n0 < n
    if not live.any():
        return scales

    # work with log distances so subnormal gaps cannot underflow the bracket
    sub = shifted[live]
    with np.errstate(divide="ignore"):
        log_sub = np.log(sub)  # -inf at the minimal distance, where w = 1
    lo = np.where(sub > 0.0, log_sub, np.inf).min(axis=1) + math.log(_LO_FACTOR)
    hi = log_sub.max(axis=1) + 0.5 * math.log(n) + math.log(_HI_FACTOR)
    goal = target[live]
    for _ in range(_BISECTION_STEPS):
        mid = (lo + hi) / 2
        with np.errstate(over="ignore"):  # exp(-inf) = 0 is the right weight
            w = np.exp(-np.exp(log_sub - mid[:, None]))
        below = _participation(w) < goal
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    scales[live] = np.exp((lo + hi) / 2)
    return scales


def attribute_scales(model: KStarModel, query: Sequence[float]) -> np.ndarray:
    q = _check_query(query)
    return solve_scales(np.abs(model._x - q).T, model.blend)


def _check_query(query: Sequence[float]) -> np.ndarray:
    q = np.asarray(query, dtype=float)
    if q.shape != (N_FEATURES,):
        raise ValueError(f"query must have {N_FEATURES} values, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("query contains non-finite values")
    return q


def instance_log_weights(model: KStarModel, query: Sequence[float]) -> np.ndarray:
    """Log of the combined weight of each training instance (up to a constant)."""
    q = _check_query(query)
    dist = np.abs(model._x - q)  # (instances, attributes)
    scales = solve_scales(dist.T, model.blend)
    shifted = dist - dist.min(axis=0)
    with np.errstate(invalid="ignore"):
        terms = np.where(np.isinf(scales)[None, :], 0.0, shifted / scales[None, :])
    return -terms.sum(axis=1)


def kstar_predict(model: KStarModel, query: Sequence[float]) -> tuple[ActivityType, dict[ActivityType, float]]:
    """Predicted label and normalised per-class scores (summing to 1)."""
    logw = instance_log_weights(model, query)
    w = np.exp(logw - logw.max())
    raw = {t: [] for t in ActivityType}
    for weight, label in zip(w.tolist(), model.training.labels):
        raw[label].append(weight)
    # fsum keeps class totals independent of instance order
    totals = {t: math.fsum(v) for t, v in raw.items()}
    norm = math.fsum(totals.values())
    scores = {t: v / norm for t, v in totals.items()}
    best = max(scores.values())
    label = next(t for t in ActivityType if scores[t] == best)
    return label, scores


def save_model(model: KStarModel, path: str) -> None:
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "kind": "kstar",
        "blend": model.blend,
        "instances": [
            {"features": list(f), "label": lab.value}
            for f, lab in zip(model.training.features, model.training.labels)
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path: str) -> KStarModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != MODEL_SCHEMA_VERSION or doc.get("kind") != "kstar":
        raise ValueError(f"{path}: not a version {MODEL_SCHEMA_VERSION} kstar model file")
    data = LabeledDataset.from_rows(
        (inst["features"], ActivityType.parse(inst["label"])) for inst in doc["instances"]
    )
    return kstar_train(data, float(doc["blend"]))
