"""Risk factor: one number for how much a service holds about a person.

The factor weights each record kind by how intimate it tends to be
(messages most, incidental files least) and compresses counts on a log
scale, so the number summarizes scope without letting one huge mailbox
dwarf everything else. The scoreboard entry derived from it carries
only the service name and the factor; no value computed from record
contents leaves the profile, which is what makes the entry safe to
share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .profile import ArchiveProfile

__all__ = [
    "RISK_WEIGHTS",
    "ScoreboardEntry",
    "entry_to_tree",
    "risk_factor",
    "scoreboard_entry",
]

RISK_WEIGHTS = {"messages": 6, "posts": 5, "activity": 4, "profile": 3, "other": 2}


@dataclass(frozen=True)
class ScoreboardEntry:
    """Shareable summary: service plus risk factor, nothing else."""

    service: str
    risk_factor: int


def _round_half_up(value: float) -> int:
    # buckets round away from the default, not to the nearest even value
    return math.floor(value + 0.5)


def risk_factor(prof: ArchiveProfile) -> int:
    """Weighted log-scale sum of counts, clamped to [0, 100].

    Zero counts contribute nothing (log2 of 1), so an empty archive
    scores 0; incrementing any count never lowers the factor.
    """
    raw = sum(
        weight * math.log2(1 + prof.counts_by_kind.get(kind, 0))
        for kind, weight in RISK_WEIGHTS.items()
    )
    return min(100, max(0, _round_half_up(raw)))


def scoreboard_entry(prof: ArchiveProfile) -> ScoreboardEntry:
    return ScoreboardEntry(service=prof.service, risk_factor=risk_factor(prof))


def entry_to_tree(entry: ScoreboardEntry) -> dict:
    return {"service": entry.service, "riskFactor": entry.risk_factor}
