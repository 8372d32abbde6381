"""Privacy scoring over documents and external signals."""

from .engine import (
    GREEN,
    RED,
    TOSDR_GRADES,
    YELLOW,
    BreakdownEntry,
    ExternalSignals,
    ScoreReport,
    SummaryCard,
    card_to_tree,
    compute_score,
    report_to_tree,
    signals_from_tree,
    summarize,
)

__all__ = [
    "GREEN",
    "RED",
    "TOSDR_GRADES",
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
