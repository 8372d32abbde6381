"""Deterministic template Q&A over a single document.

Answers are filled exclusively with values resolved from the document
tree; every path so used is listed in ``evidencePaths``. Templates are
selected by the document's language with English fallback.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any

from ..core import codec, model
from ..errors import UnknownCategoryError, ValidationError

__all__ = ["INTENT_KINDS", "Answer", "Intent", "answer_question", "intent_from_tree"]

INTENT_KINDS = (
    "CONTROLLER_IDENTITY",
    "THIRD_COUNTRY_TRANSFERS",
    "PURPOSES_FOR_CATEGORY",
    "RETENTION_FOR_CATEGORY",
    "ADM_IN_USE",
    "RIGHTS_SUMMARY",
)

_PARAMETERIZED = ("PURPOSES_FOR_CATEGORY", "RETENTION_FOR_CATEGORY")


@dataclass(frozen=True)
class Intent:
    kind: str
    params: tuple[tuple[str, str], ...] = ()

    def param(self, key: str) -> str | None:
        for name, value in self.params:
            if name == key:
                return value
        return None


@dataclass(frozen=True)
class Answer:
    answer_text: str
    evidence_paths: tuple[str, ...]

    def to_tree(self) -> dict:
        return {"answerText": self.answer_text, "evidencePaths": list(self.evidence_paths)}


def intent_from_tree(tree: Any) -> Intent:
    if not isinstance(tree, dict):
        raise ValidationError("must be an object", "")
    for key in tree:
        if key not in {"kind", "params"}:
            raise ValidationError("unknown field", key)
    kind = tree.get("kind")
    if kind not in INTENT_KINDS:
        raise ValidationError(f"must be one of {'|'.join(INTENT_KINDS)}", "kind")
    params = tree.get("params", {})
    if not isinstance(params, dict):
        raise ValidationError("must be an object", "params")
    for key, value in params.items():
        if key != "category":
            raise ValidationError("unknown field", f"params/{key}")
        if not isinstance(value, str):
            raise ValidationError("must be text", "params/category")
    if kind in _PARAMETERIZED and not params.get("category"):
        raise ValidationError("category is required for this intent", "params/category")
    return Intent(kind=kind, params=tuple(sorted(params.items())))


@lru_cache(maxsize=1)
def _templates() -> dict:
    path = resources.files(__package__) / "data" / "qa_templates.json"
    return json.loads(path.read_text(encoding="utf-8"))


class _Fill:
    """Collects evidence while resolving interpolation values."""

    def __init__(self, tree: dict) -> None:
        self.tree = tree
        self.paths: list[str] = []
        self.slots: dict[str, Any] = {}

    def note(self, path: str) -> None:
        if path not in self.paths:
            self.paths.append(path)

    def take(self, slot: str, path: str) -> None:
        node: Any = self.tree
        for seg in path.split("/"):
            node = node[int(seg)] if isinstance(node, list) else node[seg]
        self.slots[slot] = node
        self.note(path)


def _category_index(doc: model.TiltDocument, category: str) -> int:
    for i, entry in enumerate(doc.data_disclosed):
        if entry.category == category:
            return i
    raise UnknownCategoryError(f"no disclosed category named {category}")


def _variant(doc: model.TiltDocument, intent: Intent, fill: _Fill) -> str:
    kind = intent.kind
    if kind == "CONTROLLER_IDENTITY":
        fill.take("name", "controller/name")
        fill.take("address", "controller/address")
        fill.take("country", "controller/country")
        return "identity"
    if kind == "THIRD_COUNTRY_TRANSFERS":
        fill.note("thirdCountryTransfers")
        if not doc.third_country_transfers:
            return "none"
        fill.slots["count"] = len(doc.third_country_transfers)
        countries = []
        for i in range(len(doc.third_country_transfers)):
            path = f"thirdCountryTransfers/{i}/country"
            fill.take(f"country{i}", path)
            countries.append(fill.slots.pop(f"country{i}"))
        fill.slots["countries"] = ", ".join(countries)
        return "some"
    if kind == "PURPOSES_FOR_CATEGORY":
        index = _category_index(doc, intent.param("category") or "")
        fill.take("category", f"dataDisclosed/{index}/category")
        entry = doc.data_disclosed[index]
        if not entry.purposes:
            fill.note(f"dataDisclosed/{index}/purposes")
            return "none"
        descriptions = []
        for j in range(len(entry.purposes)):
            path = f"dataDisclosed/{index}/purposes/{j}/description"
            fill.take(f"purpose{j}", path)
            descriptions.append(fill.slots.pop(f"purpose{j}"))
        fill.slots["purposes"] = "; ".join(descriptions)
        return "some"
    if kind == "RETENTION_FOR_CATEGORY":
        index = _category_index(doc, intent.param("category") or "")
        fill.take("category", f"dataDisclosed/{index}/category")
        entry = doc.data_disclosed[index]
        if entry.storage is None:
            return "none"
        fill.take("kind", f"dataDisclosed/{index}/storage/kind")
        fill.take("value", f"dataDisclosed/{index}/storage/value")
        return str(fill.slots.pop("kind"))
    if kind == "ADM_IN_USE":
        adm = doc.automated_decision_making
        if adm is None:
            return "absent"
        fill.note("automatedDecisionMaking/inUse")
        if not adm.in_use:
            return "no"
        if adm.logic_description:
            fill.take("logic", "automatedDecisionMaking/logicDescription")
            return "yes_logic"
        return "yes"
    # RIGHTS_SUMMARY
    available = []
    for key in model.RIGHT_KEYS:
        entry = doc.rights.entry(key)
        if entry is not None and entry.available:
            fill.note(f"rights/{key}/available")
            available.append(key)
    if not available:
        return "none"
    fill.slots["rights"] = ", ".join(available)
    return "some"


def answer_question(doc: model.TiltDocument, intent: Intent) -> Answer:
    """Pure function of (document, intent); identical inputs, identical answer."""
    table = _templates()[intent.kind]
    language = doc.meta.language if doc.meta.language in table else "en"
    fill = _Fill(codec.document_to_tree(doc))
    variant = _variant(doc, intent, fill)
    text = table[language][variant].format(**fill.slots)
    return Answer(answer_text=text, evidence_paths=tuple(fill.paths))
