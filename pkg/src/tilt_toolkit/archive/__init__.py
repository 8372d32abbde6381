"""Local analysis of data-export archives: manifest, profile, risk."""

from .ingest import (
    KINDS,
    ArchiveFile,
    ArchiveManifest,
    classify,
    ingest,
    manifest_to_tree,
    read_records,
)
from .profile import (
    TIMESTAMP_FIELDS,
    ArchiveProfile,
    profile,
    profile_to_tree,
    record_timestamp,
)
from .risk import (
    RISK_WEIGHTS,
    ScoreboardEntry,
    entry_to_tree,
    risk_factor,
    scoreboard_entry,
)

__all__ = [
    "ArchiveFile",
    "ArchiveManifest",
    "ArchiveProfile",
    "KINDS",
    "RISK_WEIGHTS",
    "ScoreboardEntry",
    "TIMESTAMP_FIELDS",
    "classify",
    "entry_to_tree",
    "ingest",
    "manifest_to_tree",
    "profile",
    "profile_to_tree",
    "read_records",
    "record_timestamp",
    "risk_factor",
    "scoreboard_entry",
]
