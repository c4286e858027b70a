"""Synthesise a labelled feature dataset from app definitions."""

from __future__ import annotations

import random
from importlib import resources
from typing import Sequence

from screentest.activity import ActivityType, DatasetError, LabeledDataset
from screentest.features import dataset_from_csv, extract_features
from screentest.lexicon import LexiconConfig, default_lexicon
from screentest.simdevice.model import ScreenDef, SimApp
from screentest.simdevice.render import Perturbation, render

DEFAULT_PER_TYPE = 12
DEFAULT_SEED = 7
JITTER_FRACTION = 0.05


def source_screens(apps: Sequence[SimApp]) -> dict[ActivityType, list[tuple[SimApp, ScreenDef]]]:
    out: dict[ActivityType, list[tuple[SimApp, ScreenDef]]] = {t: [] for t in ActivityType}
    for app in apps:
        for sid in app.screens:
            sdef = app.screen(sid)
            out[sdef.true_type].append((app, sdef))
    return out


def build_dataset_from_apps(
    apps: Sequence[SimApp],
    per_type_count: int = DEFAULT_PER_TYPE,
    seed: int = DEFAULT_SEED,
    lexicon: LexiconConfig | None = None,
    jitter_fraction: float = JITTER_FRACTION,
) -> LabeledDataset:
    """``per_type_count`` perturbed renderings per activity type.

    Types are filled in declaration order; within a type the source screens
    are cycled round-robin. Every screen is rendered from its app's initial
    state with one shared seeded generator, so the output depends only on
    the inputs and the seed.
    """
    if per_type_count < 1:
        raise DatasetError("per_type_count must be at least 1")
    lex = lexicon or default_lexicon()
    sources = source_screens(apps)
    missing = [t.value for t, s in sources.items() if not s]
    if missing:
        raise DatasetError(f"no source screens for activity type(s): {', '.join(missing)}")
    rng = random.Random(seed)
    features, labels = [], []
    for kind in ActivityType:
        pool = sources[kind]
        for i in range(per_type_count):
            app, sdef = pool[i % len(pool)]
            jitter = round(jitter_fraction * app.display[1])
            rendered = render(app, sdef, app.state, {}, Perturbation(rng, jitter))
            features.append(extract_features(rendered.snapshot, lex).as_floats())
            labels.append(kind)
    return LabeledDataset(tuple(features), tuple(labels))


BUNDLED_DATASET = "activities.csv"


def bundled_dataset() -> LabeledDataset:
    """The dataset generated from the bundled apps with the default count and seed."""
    text = resources.files("screentest.data").joinpath(BUNDLED_DATASET).read_text("utf-8")
    return dataset_from_csv(text)
