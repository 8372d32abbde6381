"""Filter expressions over document trees.

Grammar: conjuncts joined by ``&&``, each ``path op value``. Paths are
slash-separated wire names with zero-based array indices. Values are
bare integers/floats/booleans or double-quoted JSON strings. Semantics
per operator:

- ``eq``/``neq`` match only where the path resolves (absence is asked
  with ``exists``); numbers compare numerically, other types strictly.
- ``exists`` takes a boolean and matches presence against it.
- ``contains`` matches substring on text values and membership on
  arrays; any other resolved type does not match.
- ``gte``/``lte`` require a numeric literal (checked at parse time) and
  match only numeric resolved values.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from ..errors import BadFilterError

__all__ = ["Conjunct", "FilterExpr", "evaluate", "parse_filter"]

OPS = ("eq", "neq", "exists", "contains", "gte", "lte")

_NUMBER_RE = re.compile(r"^-?\d+(\.\d+)?$")


@dataclass(frozen=True)
class Conjunct:
    path: str
    op: str
    value: Any


@dataclass(frozen=True)
class FilterExpr:
    conjuncts: tuple[Conjunct, ...]


def _parse_value(text: str, conjunct: str) -> Any:
    if text == "true":
        return True
    if text == "false":
        return False
    if _NUMBER_RE.match(text):
        return float(text) if "." in text else int(text)
    if len(text) >= 2 and text.startswith('"') and text.endswith('"'):
        try:
            value = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadFilterError(f"bad string literal in: {conjunct}") from exc
        if isinstance(value, str):
            return value
    raise BadFilterError(f"value must be a number, boolean, or quoted string: {conjunct}")


def parse_filter(text: str) -> FilterExpr:
    """Parse the query grammar; an empty string matches everything."""
    text = text.strip()
    if not text:
        return FilterExpr(conjuncts=())
    conjuncts = []
    for part in text.split("&&"):
        part = part.strip()
        if not part:
            raise BadFilterError("empty conjunct")
        pieces = part.split(None, 2)
        if len(pieces) != 3:
            raise BadFilterError(f"conjunct must be 'path op value': {part}")
        path, op, literal = pieces
        if op not in OPS:
            raise BadFilterError(f"unknown operator {op} in: {part}")
        value = _parse_value(literal.strip(), part)
        if op == "exists" and not isinstance(value, bool):
            raise BadFilterError(f"exists takes a boolean: {part}")
        if op in ("gte", "lte") and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise BadFilterError(f"{op} needs a numeric value: {part}")
        conjuncts.append(Conjunct(path=path, op=op, value=value))
    return FilterExpr(conjuncts=tuple(conjuncts))


def _resolve(tree: Any, path: str) -> tuple[bool, Any]:
    node = tree
    for seg in path.split("/"):
        if isinstance(node, dict):
            if seg not in node:
                return False, None
            node = node[seg]
        elif isinstance(node, list):
            if not seg.isdigit() or int(seg) >= len(node):
                return False, None
            node = node[int(seg)]
        else:
            return False, None
    return True, node


def _is_number(value: Any) -> bool:
    return not isinstance(value, bool) and isinstance(value, (int, float))


def _scalar_eq(found: Any, wanted: Any) -> bool:
    if _is_number(found) and _is_number(wanted):
        return found == wanted
    if type(found) is not type(wanted):
        return False
    return found == wanted


def _matches(conjunct: Conjunct, tree: Any) -> bool:
    exists, found = _resolve(tree, conjunct.path)
    if conjunct.op == "exists":
        return exists is conjunct.value
    if not exists:
        return False
    if conjunct.op == "eq":
        return _scalar_eq(found, conjunct.value)
    if conjunct.op == "neq":
        return not _scalar_eq(found, conjunct.value)
    if conjunct.op == "contains":
        if isinstance(found, str):
            return isinstance(conjunct.value, str) and conjunct.value in found
        if isinstance(found, list):
            return any(_scalar_eq(item, conjunct.value) for item in found)
        return False
    # gte / lte
    if not _is_number(found):
        return False
    return found >= conjunct.value if conjunct.op == "gte" else found <= conjunct.value


def evaluate(expr: FilterExpr, tree: Any) -> bool:
    """True iff every conjunct matches (vacuously true when empty)."""
    return all(_matches(conjunct, tree) for conjunct in expr.conjuncts)
