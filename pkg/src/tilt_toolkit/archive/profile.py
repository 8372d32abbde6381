"""Aggregate profile of an ingested archive.

The profile carries the data behind per-service overviews: record
counts by kind, the archive's time span, a monthly activity histogram,
and total size. Timestamps are pulled from the candidate fields common
across takeout formats (``created_utc``, ``timestamp``, ``taken_at``,
``date``), accepting epoch seconds or RFC 3339 text. Aggregation is
commutative, so the result does not depend on file order, and the whole
computation is local and read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from ..core.codec import format_timestamp
from ..errors import IoError
from .ingest import KINDS, ArchiveManifest, read_records

__all__ = [
    "ArchiveProfile",
    "TIMESTAMP_FIELDS",
    "profile",
    "profile_to_tree",
    "record_timestamp",
]

# checked in order; the first field that parses wins
TIMESTAMP_FIELDS = ("created_utc", "timestamp", "taken_at", "date")


@dataclass(frozen=True)
class ArchiveProfile:
    service: str
    counts_by_kind: Mapping[str, int]
    earliest: datetime | None
    latest: datetime | None
    monthly_histogram: Mapping[str, int]
    total_bytes: int


def _parse_rfc3339(text: str) -> datetime | None:
    try:
        parsed = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        return None
    if parsed.tzinfo is None:
        # takeout formats with bare timestamps mean UTC
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def record_timestamp(record: Any) -> datetime | None:
    """UTC timestamp of one record, or None when it carries none."""
    if not isinstance(record, dict):
        return None
    for field in TIMESTAMP_FIELDS:
        value = record.get(field)
        if isinstance(value, bool):
            continue
        if isinstance(value, (int, float)):
            try:
                return datetime.fromtimestamp(value, tz=timezone.utc)
            except (OverflowError, OSError, ValueError):
                continue
        if isinstance(value, str):
            parsed = _parse_rfc3339(value)
            if parsed is not None:
                return parsed
    return None


def profile(manifest: ArchiveManifest) -> ArchiveProfile:
    """Re-read the manifest's files and aggregate.

    Counts come from the manifest itself, so the conservation invariant
    (counts by kind sum to the per-file record counts) holds by
    construction; re-reading only extracts timestamps and sizes.
    """
    root = Path(manifest.root)
    counts = {kind: 0 for kind in KINDS}
    stamps: list[datetime] = []
    histogram: dict[str, int] = {}
    total_bytes = 0
    for file in manifest.files:
        counts[file.kind] += file.record_count
        path = root / file.relative_path
        try:
            total_bytes += path.stat().st_size
        except OSError as exc:
            raise IoError(f"cannot stat {path}: {exc}") from exc
        records = read_records(path)
        for record in records if records is not None else []:
            stamp = record_timestamp(record)
            if stamp is not None:
                stamps.append(stamp)
                month = f"{stamp.year:04d}-{stamp.month:02d}"
                histogram[month] = histogram.get(month, 0) + 1
    return ArchiveProfile(
        service=manifest.service,
        counts_by_kind=counts,
        earliest=min(stamps) if stamps else None,
        latest=max(stamps) if stamps else None,
        monthly_histogram=dict(sorted(histogram.items())),
        total_bytes=total_bytes,
    )


def profile_to_tree(prof: ArchiveProfile) -> dict:
    tree: dict[str, Any] = {
        "service": prof.service,
        "countsByKind": dict(prof.counts_by_kind),
        "monthlyHistogram": dict(prof.monthly_histogram),
        "totalBytes": prof.total_bytes,
    }
    if prof.earliest is not None:
        tree["earliest"] = format_timestamp(prof.earliest)
    if prof.latest is not None:
        tree["latest"] = format_timestamp(prof.latest)
    return tree
