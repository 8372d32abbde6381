"""Durable document store, filter queries, Q&A, and the REST service."""

from .filters import Conjunct, FilterExpr, evaluate, parse_filter
from .qa import INTENT_KINDS, Answer, Intent, answer_question, intent_from_tree
from .service import (
    DEFAULT_DATA_DIR,
    DEFAULT_PORT,
    HubConfig,
    create_app,
    resolve_config,
    scan_documents,
    serve,
)
from .store import DocumentStore, JsonStore, StoreRecord

__all__ = [
    "DEFAULT_DATA_DIR",
    "DEFAULT_PORT",
    "INTENT_KINDS",
    "Answer",
    "Conjunct",
    "DocumentStore",
    "FilterExpr",
    "HubConfig",
    "Intent",
    "JsonStore",
    "StoreRecord",
    "answer_question",
    "create_app",
    "evaluate",
    "intent_from_tree",
    "parse_filter",
    "resolve_config",
    "scan_documents",
    "serve",
]
