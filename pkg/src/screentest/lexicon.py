"""Associative keyword lists for locating elements by role.

An element plays a role when one of the whole tokens of its resource id is
in the role's word list. Token matching (rather than raw substring search)
keeps short words such as ``no`` from matching ``notification``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import TYPE_CHECKING, Iterable, Mapping

from screentest.hierarchy import ScreenSnapshot, UiElement, flatten

if TYPE_CHECKING:
    from screentest.features import ElementGroup

LEXICON_SCHEMA_VERSION = 1
BUILTIN_ROLES = ("close", "drawer")

_CAMEL = re.compile(r"([a-z])([A-Z])")
_NON_ALNUM = re.compile(r"[^A-Za-z0-9]+")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class KeywordList:
    role: str
    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.words:
            raise LexiconError(f"role {self.role!r}: word list is empty")
        for w in self.words:
            if not w or w != w.lower():
                raise LexiconError(f"role {self.role!r}: word {w!r} must be non-empty lowercase")
        if len(set(self.words)) != len(self.words):
            raise LexiconError(f"role {self.role!r}: duplicate words")


@dataclass(frozen=True)
class LexiconConfig:
    roles: Mapping[str, KeywordList]

    def __post_init__(self) -> None:
        missing = [r for r in BUILTIN_ROLES if r not in self.roles]
        if missing:
            raise LexiconError(f"lexicon lacks built-in roles: {', '.join(missing)}")

    def __getitem__(self, role: str) -> KeywordList:
        try:
            return self.roles[role]
        except KeyError:
            raise LexiconError(f"unknown role {role!r}") from None

    def __contains__(self, role: object) -> bool:
        return role in self.roles


def tokenize_resource_id(resource_id: str) -> list[str]:
    """Split a resource id into lowercase tokens.

    >>> tokenize_resource_id("com.app:id/btn_close_ad")
    ['btn', 'close', 'ad']
    >>> tokenize_resource_id("closeButton")
    ['close', 'button']
    """
    name = resource_id.rsplit(":id/", 1)[-1]
    name = _CAMEL.sub(r"\1 \2", name)
    return [tok.lower() for tok in _NON_ALNUM.split(name) if tok]


def matches(resource_id: str, keywords: KeywordList) -> bool:
    return not set(tokenize_resource_id(resource_id)).isdisjoint(keywords.words)


def resolve(
    snapshot: ScreenSnapshot,
    role: str,
    lexicon: LexiconConfig,
    require_group: "ElementGroup | None" = None,
) -> list[UiElement]:
    """Elements playing ``role``, in pre-order, optionally restricted to one group."""
    from screentest.features import classify_element_groups

    keywords = lexicon[role]
    found = []
    for el in flatten(snapshot):
        if not matches(el.resource_id, keywords):
            continue
        if require_group is not None and require_group not in classify_element_groups(el):
            continue
        found.append(el)
    return found


def _roles_from_doc(doc: object, source: str) -> dict[str, KeywordList]:
    if not isinstance(doc, dict) or not isinstance(doc.get("roles"), dict):
        raise LexiconError(f"{source}: expected an object with a 'roles' mapping")
    version = doc.get("schema_version", LEXICON_SCHEMA_VERSION)
    if version != LEXICON_SCHEMA_VERSION:
        raise LexiconError(f"{source}: unsupported schema_version {version!r}")
    out = {}
    for role, entry in doc["roles"].items():
        words = entry.get("words") if isinstance(entry, dict) else entry
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise LexiconError(f"{source}: roles.{role}.words must be a list of strings")
        out[role] = KeywordList(role, tuple(words))
    return out


def default_lexicon() -> LexiconConfig:
    text = resources.files("screentest.data").joinpath("lexicon.json").read_text("utf-8")
    return LexiconConfig(_roles_from_doc(json.loads(text), "builtin lexicon"))


def load_lexicon(path: str | None = None, overrides: Iterable[KeywordList] = ()) -> LexiconConfig:
    """Built-in lexicon, extended or overridden by a user file and explicit lists."""
    roles = dict(default_lexicon().roles)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise LexiconError(f"{path}: malformed JSON: {exc}") from None
        roles.update(_roles_from_doc(doc, path))
    for kw in overrides:
        roles[kw.role] = kw
    return LexiconConfig(roles)
