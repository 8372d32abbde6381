"""Privacy score, label, and summary card for a document plus signals.

The penalty table is a declared convention (see ``docs/scoring.md``),
not derived from any upstream source. All arithmetic is integer so
every report is exactly reproducible: rawScore is 100 plus the sum of
breakdown points, the published score clamps it to [0, 100], and the
label is a pure function of the score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from ..core import check_completeness, model
from ..errors import ValidationError

__all__ = [
    "GREEN",
    "RED",
    "YELLOW",
    "BreakdownEntry",
    "ExternalSignals",
    "ScoreReport",
    "SummaryCard",
    "card_to_tree",
    "compute_score",
    "report_to_tree",
    "signals_from_tree",
    "summarize",
]

GREEN = "GREEN"
YELLOW = "YELLOW"
RED = "RED"

TOSDR_GRADES = ("A", "B", "C", "D", "E")
_TOSDR_POINTS = {"A": 5, "B": 0, "C": -3, "D": -6, "E": -10}

# score-relevant completeness gaps; C08 and C14 stay out because the
# TRANSFER and ADM_OPAQUE rules already price those in
_MISSING_EXCLUDED = frozenset({"C08", "C14"})


@dataclass(frozen=True)
class ExternalSignals:
    tracker_count: int = 0
    phishing_flagged: bool = False
    tosdr_grade: str | None = None
    privacy_spy_score: float | None = None


@dataclass(frozen=True)
class BreakdownEntry:
    code: str
    points: int


@dataclass(frozen=True)
class ScoreReport:
    score: int
    label: str
    breakdown: tuple[BreakdownEntry, ...]
    raw_score: int


@dataclass(frozen=True)
class SummaryCard:
    controller_name: str
    transfer_count: int
    adm_in_use: bool
    tracker_count: int
    missing_disclosures: int


def _round_half_up(value: float) -> int:
    # symmetric rounding; the stdlib round() ties to even
    return math.floor(value + 0.5)


def _label(score: int) -> str:
    if score >= 70:
        return GREEN
    if score >= 40:
        return YELLOW
    return RED


def _unsafeguarded(doc: model.TiltDocument) -> int:
    return sum(
        1
        for transfer in doc.third_country_transfers
        if not transfer.adequacy_decision and not transfer.safeguards
    )


def compute_score(doc: model.TiltDocument, signals: ExternalSignals) -> ScoreReport:
    """Apply the penalty/bonus table; zero-point rules are omitted."""
    breakdown: list[BreakdownEntry] = []

    def add(code: str, points: int) -> None:
        if points:
            breakdown.append(BreakdownEntry(code, points))

    add("TRACKERS", -min(40, 4 * signals.tracker_count))
    if signals.phishing_flagged:
        add("PHISH", -50)
    add("TRANSFER", -min(20, 10 * _unsafeguarded(doc)))
    adm = doc.automated_decision_making
    if adm is not None and adm.in_use and not adm.logic_description:
        add("ADM_OPAQUE", -10)
    missing = [key for key in check_completeness(doc).missing() if key not in _MISSING_EXCLUDED]
    add("MISSING", -min(20, 2 * len(missing)))
    if signals.tosdr_grade is not None:
        add("TOSDR", _TOSDR_POINTS[signals.tosdr_grade])
    if signals.privacy_spy_score is not None:
        add("PSPY", -_round_half_up(10 - signals.privacy_spy_score))

    raw = 100 + sum(entry.points for entry in breakdown)
    score = max(0, min(100, raw))
    return ScoreReport(score=score, label=_label(score), breakdown=tuple(breakdown), raw_score=raw)


def summarize(doc: model.TiltDocument, signals: ExternalSignals) -> SummaryCard:
    adm = doc.automated_decision_making
    return SummaryCard(
        controller_name=doc.controller.name,
        transfer_count=len(doc.third_country_transfers),
        adm_in_use=adm.in_use if adm is not None else False,
        tracker_count=signals.tracker_count,
        missing_disclosures=len(check_completeness(doc).missing()),
    )


def signals_from_tree(tree: Any, path: str = "") -> ExternalSignals:
    """Validate one signals record (wire names, strict ranges)."""
    if not isinstance(tree, dict):
        raise ValidationError("must be an object", path)
    allowed = {"trackerCount", "phishingFlagged", "tosdrGrade", "privacySpyScore"}
    for key in tree:
        if key not in allowed:
            raise ValidationError("unknown field", f"{path}/{key}" if path else key)

    def where(key: str) -> str:
        return f"{path}/{key}" if path else key

    trackers = tree.get("trackerCount", 0)
    if isinstance(trackers, bool) or not isinstance(trackers, int) or trackers < 0:
        raise ValidationError("must be an integer >= 0", where("trackerCount"))
    flagged = tree.get("phishingFlagged", False)
    if not isinstance(flagged, bool):
        raise ValidationError("must be a boolean", where("phishingFlagged"))
    grade = tree.get("tosdrGrade")
    if grade is not None and grade not in TOSDR_GRADES:
        raise ValidationError("must be one of A|B|C|D|E", where("tosdrGrade"))
    spy = tree.get("privacySpyScore")
    if spy is not None:
        if isinstance(spy, bool) or not isinstance(spy, (int, float)) or not 0 <= spy <= 10:
            raise ValidationError("must be a number in [0, 10]", where("privacySpyScore"))
        spy = float(spy)
    return ExternalSignals(
        tracker_count=trackers,
        phishing_flagged=flagged,
        tosdr_grade=grade,
        privacy_spy_score=spy,
    )


def report_to_tree(report: ScoreReport) -> dict:
    return {
        "score": report.score,
        "label": report.label,
        "rawScore": report.raw_score,
        "breakdown": [{"code": entry.code, "points": entry.points} for entry in report.breakdown],
    }


def card_to_tree(card: SummaryCard) -> dict:
    return {
        "controllerName": card.controller_name,
        "transferCount": card.transfer_count,
        "admInUse": card.adm_in_use,
        "trackerCount": card.tracker_count,
        "missingDisclosures": card.missing_disclosures,
    }
