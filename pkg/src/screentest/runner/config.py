"""Run configuration, loadable from a versioned JSON file."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any

from screentest.lexicon import LexiconConfig, default_lexicon, load_lexicon
from screentest.scenarios.base import DEFAULT_SPLASH_TIMEOUT_MS, Credentials

CONFIG_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EventMix:
    """Monkey event weights; they must sum to 1."""

    tap: float = 0.60
    swipe: float = 0.15
    long_press: float = 0.10
    text: float = 0.10
    back: float = 0.05

    def __post_init__(self) -> None:
        ws = self.weights()
        if any(w < 0 or not math.isfinite(w) for w in ws):
            raise ConfigError("event weights must be finite and non-negative")
        if abs(math.fsum(ws) - 1.0) > 1e-9:
            raise ConfigError(f"event weights must sum to 1, got {math.fsum(ws)}")

    def weights(self) -> tuple[float, ...]:
        return (self.tap, self.swipe, self.long_press, self.text, self.back)


@dataclass(frozen=True)
class RunConfig:
    time_budget_ms: int = 120_000
    model_path: str | None = None
    lexicon_path: str | None = None
    credentials: Credentials | None = None
    explore_seed: int = 0  # accepted for config symmetry; BFS exploration draws no randomness
    scenario_seed: int = 0
    monkey_seed: int = 0
    monkey_event_count: int = 50_000
    monkey_event_cost_ms: int = 2
    event_mix: EventMix = field(default_factory=EventMix)
    splash_timeout_ms: int = DEFAULT_SPLASH_TIMEOUT_MS

    def __post_init__(self) -> None:
        if self.time_budget_ms <= 0:
            raise ConfigError("time_budget_ms must be positive")
        if self.monkey_event_count <= 0:
            raise ConfigError("monkey_event_count must be positive")
        if self.monkey_event_cost_ms < 0 or self.splash_timeout_ms <= 0:
            raise ConfigError("event cost must be >= 0 and splash timeout > 0")

    def lexicon(self) -> LexiconConfig:
        return load_lexicon(self.lexicon_path) if self.lexicon_path else default_lexicon()

    def with_(self, **changes: Any) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def config_from_dict(doc: Any) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("run config must be a JSON object")
    version = doc.get("schema_version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known - {"schema_version"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    kwargs = {k: v for k, v in doc.items() if k in known}
    try:
        if "credentials" in kwargs and kwargs["credentials"] is not None:
            c = kwargs["credentials"]
            kwargs["credentials"] = Credentials(c["username"], c["password"])
        if "event_mix" in kwargs:
            kwargs["event_mix"] = EventMix(**kwargs["event_mix"])
        return RunConfig(**kwargs)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad run config: {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_run_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON: {exc}") from None
    return config_from_dict(doc)
