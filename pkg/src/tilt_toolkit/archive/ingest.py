"""Archive ingestion: walk an unpacked data export and build a manifest.

An export archive is whatever a service's takeout produced: a directory
tree of JSON files in service-specific shapes. Ingestion stays
content-agnostic. The generic adapter counts records (a top-level array
counts its elements, anything else parseable counts as one record), and
the file's kind comes from a keyword table matched against the relative
path, shipped as data so new services need no code changes. Unparseable
files are kept in the manifest as kind ``other`` with zero records and a
path-only warning; their bytes still belong to the archive.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from importlib import resources
from functools import lru_cache
from pathlib import Path
from typing import Any

from ..errors import EmptyArchiveError, IoError

__all__ = [
    "ArchiveFile",
    "ArchiveManifest",
    "KINDS",
    "classify",
    "ingest",
    "manifest_to_tree",
    "read_records",
]

log = logging.getLogger(__name__)

# classification priority: first kind whose keyword matches wins
KINDS = ("messages", "posts", "profile", "activity", "other")


@dataclass(frozen=True)
class ArchiveFile:
    relative_path: str
    kind: str
    record_count: int


@dataclass(frozen=True)
class ArchiveManifest:
    """What an archive contains, before any content is interpreted."""

    service: str
    root: str
    files: tuple[ArchiveFile, ...]


@lru_cache(maxsize=1)
def _keyword_table() -> tuple[tuple[str, tuple[str, ...]], ...]:
    package = resources.files("tilt_toolkit.archive")
    tree = json.loads(package.joinpath("data/kind_keywords.json").read_text("utf-8"))
    return tuple((kind, tuple(tree[kind])) for kind in KINDS if kind in tree)


def classify(relative_path: str) -> str:
    """Kind for a file, from keywords against the relative path's words.

    A keyword matches as a word prefix, so ``message`` catches
    ``messages/inbox.json`` while ``history`` stays clear of
    ``stories``. The first kind in priority order with a match wins.
    """
    words = re.split(r"[^a-z0-9]+", relative_path.lower())
    for kind, keywords in _keyword_table():
        for keyword in keywords:
            if any(word.startswith(keyword) for word in words):
                return kind
    return "other"


def read_records(path: Path) -> list[Any] | None:
    """Parse one file with the generic adapter; None means unparseable."""
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        tree = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        return None
    if isinstance(tree, list):
        return tree
    return [tree]


def ingest(directory: str | Path, service: str | None = None) -> ArchiveManifest:
    """Walk the archive and count every file.

    ``service`` defaults to the directory's name. Raises IoError when
    the directory cannot be read and EmptyArchiveError when it holds no
    files at all.
    """
    root = Path(directory)
    if not root.is_dir():
        raise IoError(f"not a readable directory: {directory}")
    try:
        # sorted for a deterministic manifest regardless of walk order
        paths = sorted(
            path.relative_to(root).as_posix()
            for path in root.rglob("*")
            if path.is_file()
        )
    except OSError as exc:
        raise IoError(f"cannot walk {directory}: {exc}") from exc
    if not paths:
        raise EmptyArchiveError(f"no files under {directory}")
    files = []
    for relative in paths:
        records = read_records(root / relative)
        if records is None:
            # warning names the path only; record contents never reach logs
            log.warning("unparseable file counted as other/0: %s", relative)
            files.append(ArchiveFile(relative, "other", 0))
        else:
            files.append(ArchiveFile(relative, classify(relative), len(records)))
    return ArchiveManifest(
        service=service if service is not None else root.resolve().name,
        root=str(root),
        files=tuple(files),
    )


def manifest_to_tree(manifest: ArchiveManifest) -> dict:
    return {
        "service": manifest.service,
        "root": manifest.root,
        "files": [
            {
                "relativePath": file.relative_path,
                "kind": file.kind,
                "recordCount": file.record_count,
            }
            for file in manifest.files
        ],
    }
