"""Durable versioned storage for documents and annotation records.

Layout under the data directory: one subdirectory per document id, one
canonical-form ``.tilt`` file per version, plus ``index.json`` listing
ids and versions. The directory tree is the source of truth; the index
is rebuilt from it on startup. Every write lands in a temp file that is
fsynced, atomically renamed, and followed by a directory fsync, so an
acknowledged put survives a process kill.
"""

from __future__ import annotations

import json
import os
import shutil
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import quote, unquote

from ..core import codec, model
from ..errors import IoError, NotFoundError, VersionConflictError

__all__ = ["DocumentStore", "JsonStore", "StoreRecord"]


@dataclass(frozen=True)
class StoreRecord:
    doc: model.TiltDocument
    stored_at: datetime
    etag: str


def _fsync_dir(path: Path) -> None:
    if not hasattr(os, "O_DIRECTORY"):
        return
    fd = os.open(path, os.O_RDONLY | os.O_DIRECTORY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


def _write_atomic(path: Path, data: bytes) -> None:
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
        _fsync_dir(path.parent)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


class _LockTable:
    """One lock per key; writes serialize per id, ids stay independent."""

    def __init__(self) -> None:
        self._guard = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}

    def get(self, key: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())


class DocumentStore:
    def __init__(self, root: str | Path) -> None:
        self._root = Path(root)
        self._documents = self._root / "documents"
        self._index_path = self._root / "index.json"
        self._locks = _LockTable()
        self._index_lock = threading.Lock()
        try:
            self._documents.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoError(f"cannot create data directory {self._root}: {exc}") from exc
        self._rewrite_index()

    # --- layout helpers ---------------------------------------------------

    def _dir_for(self, doc_id: str) -> Path:
        return self._documents / quote(doc_id, safe="")

    @staticmethod
    def _version_file(version: int) -> str:
        return f"{version:08d}.tilt"

    def _scan_versions(self, doc_id: str) -> tuple[int, ...]:
        directory = self._dir_for(doc_id)
        if not directory.is_dir():
            return ()
        found = []
        for name in os.listdir(directory):
            if name.endswith(".tilt") and name[:-5].isdigit():
                found.append(int(name[:-5]))
        return tuple(sorted(found))

    def _rewrite_index(self) -> None:
        table = {
            doc_id: list(versions)
            for doc_id in self.ids()
            if (versions := self._scan_versions(doc_id))
        }
        with self._index_lock:
            _write_atomic(
                self._index_path,
                json.dumps({"documents": table}, sort_keys=True, indent=1).encode("utf-8"),
            )

    # --- public API ---------------------------------------------------------

    def ids(self) -> tuple[str, ...]:
        try:
            names = os.listdir(self._documents)
        except OSError as exc:
            raise IoError(f"cannot list {self._documents}: {exc}") from exc
        return tuple(sorted(unquote(name) for name in names))

    def versions(self, doc_id: str) -> tuple[int, ...]:
        return self._scan_versions(doc_id)

    def latest_version(self, doc_id: str) -> int | None:
        versions = self._scan_versions(doc_id)
        return versions[-1] if versions else None

    def put(self, doc: model.TiltDocument) -> str:
        """Persist a new version; returns the content hash as etag.

        The version must exceed the stored latest for the id. The call
        returns only after file and directory are fsynced.
        """
        doc_id = doc.meta.id
        with self._locks.get(doc_id):
            latest = self.latest_version(doc_id)
            if latest is not None and doc.meta.version <= latest:
                raise VersionConflictError(
                    f"version {doc.meta.version} not above stored latest {latest} for {doc_id}"
                )
            directory = self._dir_for(doc_id)
            try:
                directory.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise IoError(f"cannot create {directory}: {exc}") from exc
            _write_atomic(
                directory / self._version_file(doc.meta.version),
                codec.canonicalize(doc).encode("utf-8"),
            )
        self._rewrite_index()
        return codec.compute_hash(doc)

    def fetch(self, doc_id: str, version: int | None = None) -> StoreRecord:
        """Latest version by default; meta.hash arrives filled as etag."""
        if version is None:
            version = self.latest_version(doc_id)
            if version is None:
                raise NotFoundError(f"no document stored under id {doc_id}")
        path = self._dir_for(doc_id) / self._version_file(version)
        try:
            text = path.read_text(encoding="utf-8")
            stat = path.stat()
        except FileNotFoundError:
            raise NotFoundError(f"no version {version} for document {doc_id}") from None
        except OSError as exc:
            raise IoError(f"cannot read {path}: {exc}") from exc
        doc = codec.with_hash(codec.parse(text))
        return StoreRecord(
            doc=doc,
            stored_at=datetime.fromtimestamp(stat.st_mtime, tz=timezone.utc),
            etag=doc.meta.hash,
        )

    def delete(self, doc_id: str) -> None:
        """Remove an id with all versions; absence is an error."""
        with self._locks.get(doc_id):
            directory = self._dir_for(doc_id)
            if not directory.is_dir():
                raise NotFoundError(f"no document stored under id {doc_id}")
            try:
                shutil.rmtree(directory)
            except OSError as exc:
                raise IoError(f"cannot delete {directory}: {exc}") from exc
        self._rewrite_index()


class JsonStore:
    """Flat atomic JSON-per-key store for policies and tasks."""

    def __init__(self, root: str | Path) -> None:
        self._root = Path(root)
        self._locks = _LockTable()
        try:
            self._root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoError(f"cannot create data directory {self._root}: {exc}") from exc

    def _path(self, key: str) -> Path:
        return self._root / f"{quote(key, safe='')}.json"

    def lock(self, key: str) -> threading.Lock:
        return self._locks.get(key)

    def put(self, key: str, tree: dict) -> None:
        data = json.dumps(tree, ensure_ascii=False, sort_keys=True, indent=1)
        _write_atomic(self._path(key), data.encode("utf-8"))

    def get(self, key: str) -> dict:
        try:
            return json.loads(self._path(key).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise NotFoundError(f"no record stored under {key}") from None
        except OSError as exc:
            raise IoError(f"cannot read {self._path(key)}: {exc}") from exc

    def exists(self, key: str) -> bool:
        return self._path(key).is_file()

    def keys(self) -> tuple[str, ...]:
        try:
            names = os.listdir(self._root)
        except OSError as exc:
            raise IoError(f"cannot list {self._root}: {exc}") from exc
        return tuple(sorted(unquote(name[:-5]) for name in names if name.endswith(".json")))
