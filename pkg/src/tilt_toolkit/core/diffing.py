"""Structural diff and patch over canonical document trees.

Paths are slash-separated wire names with zero-based array indices.
Arrays are compared by index: shared positions recurse, surplus tail
positions become added/removed entries. ``meta.hash`` and
``meta.modified`` never appear in a diff; applying one therefore keeps
the base document's modified stamp and leaves the hash blank.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any

from ..errors import ConflictError, PathError, ValidationError
from . import model
from .codec import document_from_tree, document_to_tree

__all__ = ["OPS", "DiffEntry", "DocumentDiff", "apply_diff", "diff", "diff_from_tree", "diff_to_tree"]

ADDED = "added"
REMOVED = "removed"
CHANGED = "changed"
OPS = (ADDED, REMOVED, CHANGED)

#: values are JSON sub-trees; document trees never contain null, so None
#: doubles as "absent" (added entries have no before, removed no after)


@dataclass(frozen=True)
class DiffEntry:
    path: str
    op: str
    before: Any = None
    after: Any = None


@dataclass(frozen=True)
class DocumentDiff:
    entries: tuple[DiffEntry, ...]


def _comparison_tree(doc: model.TiltDocument) -> dict:
    tree = document_to_tree(doc)
    del tree["meta"]["hash"]
    del tree["meta"]["modified"]
    return tree


def _walk(before: Any, after: Any, path: str, out: list[DiffEntry]) -> None:
    if isinstance(before, dict) and isinstance(after, dict):
        for key in before.keys() | after.keys():
            child = f"{path}/{key}" if path else key
            if key not in after:
                out.append(DiffEntry(child, REMOVED, before=before[key]))
            elif key not in before:
                out.append(DiffEntry(child, ADDED, after=after[key]))
            else:
                _walk(before[key], after[key], child, out)
        return
    if isinstance(before, list) and isinstance(after, list):
        for i in range(min(len(before), len(after))):
            _walk(before[i], after[i], f"{path}/{i}", out)
        for i in range(len(after), len(before)):
            out.append(DiffEntry(f"{path}/{i}", REMOVED, before=before[i]))
        for i in range(len(before), len(after)):
            out.append(DiffEntry(f"{path}/{i}", ADDED, after=after[i]))
        return
    # `1 == True` in Python, so compare types before values
    if type(before) is not type(after) or before != after:
        out.append(DiffEntry(path, CHANGED, before=before, after=after))


def diff(old: model.TiltDocument, new: model.TiltDocument) -> DocumentDiff:
    """Field-level diff; entries sorted by path, paths unique."""
    entries: list[DiffEntry] = []
    _walk(_comparison_tree(old), _comparison_tree(new), "", entries)
    entries.sort(key=lambda entry: entry.path)
    return DocumentDiff(entries=tuple(entries))


def _segments(path: str) -> list[str]:
    return path.split("/")


def _application_key(path: str) -> tuple:
    # numeric-aware ordering so array removals can run highest-index-first
    return tuple((0, int(seg)) if seg.isdigit() else (1, seg) for seg in _segments(path))


def _resolve(tree: Any, segments: list[str], path: str) -> Any:
    node = tree
    for seg in segments:
        if isinstance(node, dict):
            if seg not in node:
                raise LookupError
            node = node[seg]
        elif isinstance(node, list):
            if not seg.isdigit() or int(seg) >= len(node):
                raise LookupError
            node = node[int(seg)]
        else:
            raise LookupError
    return node


def _parent_and_leaf(tree: Any, entry: DiffEntry) -> tuple[Any, str]:
    segments = _segments(entry.path)
    try:
        parent = _resolve(tree, segments[:-1], entry.path)
    except LookupError:
        raise PathError("parent path not found", entry.path) from None
    if not isinstance(parent, (dict, list)):
        raise PathError("parent is not a container", entry.path)
    return parent, segments[-1]


def _verify(tree: dict, entry: DiffEntry) -> None:
    try:
        current: Any = _resolve(tree, _segments(entry.path), entry.path)
        exists = True
    except LookupError:
        exists = False
    if entry.op == ADDED:
        if exists:
            raise ConflictError("path already present", entry.path)
        _parent_and_leaf(tree, entry)
        return
    if not exists:
        raise PathError("path not found", entry.path)
    if type(current) is not type(entry.before) or current != entry.before:
        raise ConflictError("before-value does not match document", entry.path)


def _apply_one(tree: dict, entry: DiffEntry) -> None:
    parent, leaf = _parent_and_leaf(tree, entry)
    if isinstance(parent, list):
        index = int(leaf) if leaf.isdigit() else -1
        if entry.op == ADDED:
            if not 0 <= index <= len(parent):
                raise PathError("array index out of range", entry.path)
            parent.insert(index, copy.deepcopy(entry.after))
        elif entry.op == REMOVED:
            del parent[index]
        else:
            parent[index] = copy.deepcopy(entry.after)
        return
    if entry.op == REMOVED:
        del parent[leaf]
    else:
        parent[leaf] = copy.deepcopy(entry.after)


def apply_diff(old: model.TiltDocument, delta: DocumentDiff) -> model.TiltDocument:
    """Apply a diff on top of ``old``; the result is fully revalidated.

    Every entry is verified against the unmodified document before any
    mutation: stale before-values raise ConflictError, unresolvable
    paths PathError.
    """
    seen: set[str] = set()
    for entry in delta.entries:
        if entry.op not in OPS:
            raise ValidationError("op must be one of added|removed|changed", entry.path)
        if not entry.path:
            raise PathError("path must not be empty", entry.path)
        if entry.path in seen:
            raise ValidationError("duplicate diff path", entry.path)
        seen.add(entry.path)
    tree = document_to_tree(old)
    tree["meta"]["hash"] = ""
    for entry in delta.entries:
        _verify(tree, entry)
    changes = [entry for entry in delta.entries if entry.op == CHANGED]
    removals = sorted(
        (entry for entry in delta.entries if entry.op == REMOVED),
        key=lambda entry: _application_key(entry.path),
        reverse=True,
    )
    additions = sorted(
        (entry for entry in delta.entries if entry.op == ADDED),
        key=lambda entry: _application_key(entry.path),
    )
    for entry in [*changes, *removals, *additions]:
        _apply_one(tree, entry)
    return document_from_tree(tree)


def diff_to_tree(delta: DocumentDiff) -> dict:
    entries = []
    for entry in delta.entries:
        item: dict[str, Any] = {"path": entry.path, "op": entry.op}
        if entry.op in (REMOVED, CHANGED):
            item["before"] = entry.before
        if entry.op in (ADDED, CHANGED):
            item["after"] = entry.after
        entries.append(item)
    return {"entries": entries}


def diff_from_tree(tree: Any) -> DocumentDiff:
    """Strictly validate a diff tree (sorted, unique, well-formed ops)."""
    if not isinstance(tree, dict) or set(tree) != {"entries"} or not isinstance(tree["entries"], list):
        raise ValidationError("diff must be an object with an entries array", "")
    entries: list[DiffEntry] = []
    for i, item in enumerate(tree["entries"]):
        where = f"entries/{i}"
        if not isinstance(item, dict):
            raise ValidationError("must be an object", where)
        unknown = set(item) - {"path", "op", "before", "after"}
        if unknown:
            raise ValidationError("unknown field", f"{where}/{sorted(unknown)[0]}")
        path = item.get("path")
        op = item.get("op")
        if not isinstance(path, str) or not path:
            raise ValidationError("path must be non-empty text", f"{where}/path")
        if op not in OPS:
            raise ValidationError("op must be one of added|removed|changed", f"{where}/op")
        if op in (REMOVED, CHANGED) and "before" not in item:
            raise ValidationError("before is required", f"{where}/before")
        if op in (ADDED, CHANGED) and "after" not in item:
            raise ValidationError("after is required", f"{where}/after")
        if op == ADDED and "before" in item:
            raise ValidationError("added entries carry no before", f"{where}/before")
        if op == REMOVED and "after" in item:
            raise ValidationError("removed entries carry no after", f"{where}/after")
        entries.append(DiffEntry(path, op, before=item.get("before"), after=item.get("after")))
    paths = [entry.path for entry in entries]
    if len(set(paths)) != len(paths):
        raise ValidationError("duplicate diff path", "entries")
    if paths != sorted(paths):
        raise ValidationError("entries must be sorted by path", "entries")
    return DocumentDiff(entries=tuple(entries))
