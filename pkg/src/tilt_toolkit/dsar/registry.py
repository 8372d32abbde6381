"""Service registry: which services ship an access-request recipe.

The registry is a plain JSON array whose records mirror the field
shape of community takeout directories (service, domain, url,
difficulty, notes), so entries can be maintained as data without code
changes. Lookup resolves a page's domain to the registered service,
falling back from an exact match to the longest registered suffix, so
``mobile.twitter.com`` still finds the ``twitter.com`` record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from ..errors import TiltSyntaxError, ValidationError

__all__ = [
    "DIFFICULTIES",
    "RegistryRecord",
    "parse_registry",
    "record_to_tree",
    "registry_from_tree",
    "registry_lookup",
]

DIFFICULTIES = ("direct-link", "guided", "automated")


@dataclass(frozen=True)
class RegistryRecord:
    """One service's entry: where and how to request a data export."""

    service: str
    domain: str
    request_url: str
    has_direct_link: bool
    difficulty: str
    notes: str = ""


_RECORD_KEYS = {"service", "domain", "url", "hasDirectLink", "difficulty", "notes"}


def _record_from_tree(tree: Any, path: str) -> RegistryRecord:
    if not isinstance(tree, dict):
        raise ValidationError("record must be an object", path)
    unknown = sorted(set(tree) - _RECORD_KEYS)
    if unknown:
        raise ValidationError(f"unknown field {unknown[0]!r}", path)
    for key in ("service", "domain", "url"):
        if not isinstance(tree.get(key), str) or not tree[key]:
            raise ValidationError("must be non-empty text", f"{path}/{key}")
    domain = tree["domain"]
    if domain != domain.lower() or "://" in domain:
        raise ValidationError("must be lowercase with no scheme", f"{path}/domain")
    if not isinstance(tree.get("hasDirectLink"), bool):
        raise ValidationError("must be a boolean", f"{path}/hasDirectLink")
    if tree.get("difficulty") not in DIFFICULTIES:
        raise ValidationError(
            f"must be one of {', '.join(DIFFICULTIES)}", f"{path}/difficulty"
        )
    notes = tree.get("notes", "")
    if not isinstance(notes, str):
        raise ValidationError("must be text", f"{path}/notes")
    return RegistryRecord(
        service=tree["service"],
        domain=domain,
        request_url=tree["url"],
        has_direct_link=tree["hasDirectLink"],
        difficulty=tree["difficulty"],
        notes=notes,
    )


def registry_from_tree(tree: Any) -> tuple[RegistryRecord, ...]:
    if not isinstance(tree, list):
        raise ValidationError("registry must be an array", "")
    return tuple(
        _record_from_tree(record, str(index)) for index, record in enumerate(tree)
    )


def parse_registry(text: str) -> tuple[RegistryRecord, ...]:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TiltSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    return registry_from_tree(tree)


def record_to_tree(record: RegistryRecord) -> dict:
    return {
        "service": record.service,
        "domain": record.domain,
        "url": record.request_url,
        "hasDirectLink": record.has_direct_link,
        "difficulty": record.difficulty,
        "notes": record.notes,
    }


def registry_lookup(
    records: Sequence[RegistryRecord], domain: str
) -> RegistryRecord | None:
    """Exact-domain match first, else the longest registered suffix."""
    wanted = domain.lower().rstrip(".")
    for record in records:
        if record.domain == wanted:
            return record
    best: RegistryRecord | None = None
    for record in records:
        # suffix matches only on label boundaries
        if wanted.endswith("." + record.domain):
            if best is None or len(record.domain) > len(best.domain):
                best = record
    return best
