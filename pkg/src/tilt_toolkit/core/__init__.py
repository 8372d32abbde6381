"""Document model, canonical form, completeness checking, and diffing."""

from .codec import (
    canonical_json,
    canonicalize,
    compute_hash,
    document_from_tree,
    document_to_tree,
    format_timestamp,
    is_iso_duration,
    is_normative_basis,
    parse,
    parse_timestamp,
    with_hash,
)
from .completeness import (
    CHECKLIST_KEYS,
    MISSING,
    NOT_APPLICABLE,
    PRESENT,
    CompletenessItem,
    CompletenessReport,
    check_completeness,
    report_to_tree,
)
from .countries import alpha2_codes, country_name, eu_eea_members, is_alpha2
from .diffing import DiffEntry, DocumentDiff, apply_diff, diff, diff_from_tree, diff_to_tree
from .model import (
    CORE_RIGHT_KEYS,
    RIGHT_KEYS,
    STORAGE_CRITERION,
    STORAGE_DURATION,
    STORAGE_KINDS,
    AdmInfo,
    ContactPoint,
    Controller,
    DataDisclosed,
    Meta,
    Purpose,
    Recipient,
    RightEntry,
    RightsInfo,
    Storage,
    ThirdCountryTransfer,
    TiltDocument,
)

__all__ = [
    "CHECKLIST_KEYS",
    "CORE_RIGHT_KEYS",
    "MISSING",
    "NOT_APPLICABLE",
    "PRESENT",
    "RIGHT_KEYS",
    "STORAGE_CRITERION",
    "STORAGE_DURATION",
    "STORAGE_KINDS",
    "AdmInfo",
    "CompletenessItem",
    "CompletenessReport",
    "ContactPoint",
    "Controller",
    "DataDisclosed",
    "DiffEntry",
    "DocumentDiff",
    "Meta",
    "Purpose",
    "Recipient",
    "RightEntry",
    "RightsInfo",
    "Storage",
    "ThirdCountryTransfer",
    "TiltDocument",
    "alpha2_codes",
    "apply_diff",
    "canonical_json",
    "canonicalize",
    "check_completeness",
    "compute_hash",
    "country_name",
    "diff",
    "diff_from_tree",
    "diff_to_tree",
    "document_from_tree",
    "document_to_tree",
    "eu_eea_members",
    "format_timestamp",
    "is_alpha2",
    "is_iso_duration",
    "is_normative_basis",
    "parse",
    "parse_timestamp",
    "report_to_tree",
    "with_hash",
]
