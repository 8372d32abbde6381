"""Country code tables backed by the versioned data files in ``data/``."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

__all__ = ["alpha2_codes", "codes_by_name", "country_name", "eu_eea_members", "is_alpha2"]


def _load(name: str) -> dict:
    path = resources.files(__package__) / "data" / name
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def alpha2_codes() -> frozenset[str]:
    """All officially assigned ISO 3166-1 alpha-2 codes."""
    table = _load("countries.json")
    return frozenset(entry["code"] for entry in table["countries"])


def is_alpha2(code: str) -> bool:
    return code in alpha2_codes()


@lru_cache(maxsize=1)
def _names() -> dict[str, str]:
    table = _load("countries.json")
    return {entry["code"]: entry["name"] for entry in table["countries"]}


def country_name(code: str) -> str | None:
    return _names().get(code)


@lru_cache(maxsize=1)
def eu_eea_members() -> frozenset[str]:
    """EU and EEA member codes; drives the C02 representative rule."""
    return frozenset(_load("eu_eea.json")["members"])


@lru_cache(maxsize=1)
def codes_by_name() -> dict[str, str]:
    """Lowercased English names and shipped aliases mapped to codes."""
    table = _load("countries.json")
    index: dict[str, str] = {}
    for entry in table["countries"]:
        index[entry["name"].lower()] = entry["code"]
        for alias in entry.get("aliases", ()):
            index[alias.lower()] = entry["code"]
    return index
