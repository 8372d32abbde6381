"""Value types for transparency-information documents.

All types are frozen dataclasses holding already-validated data; sequence
fields use tuples so instances stay hashable and safely shareable across
threads. Construction from untrusted input goes through
:func:`tilt_toolkit.core.codec.parse` / ``document_from_tree``, which enforce
every schema rule and report violations with a field path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

STORAGE_DURATION = "duration"
STORAGE_CRITERION = "criterion"
STORAGE_KINDS = (STORAGE_DURATION, STORAGE_CRITERION)

RIGHT_KEYS = (
    "access",
    "rectification",
    "erasure",
    "restriction",
    "portability",
    "objection",
    "withdrawConsent",
)
#: The six rights whose joint presence constitutes a complete rights catalog
#: (withdrawConsent is checked separately, only for consent-based processing).
CORE_RIGHT_KEYS = RIGHT_KEYS[:6]


def snake_right(key: str) -> str:
    """Attribute name for a wire right key, e.g. ``withdrawConsent``."""
    return {"withdrawConsent": "withdraw_consent"}.get(key, key)


@dataclass(frozen=True)
class ContactPoint:
    name: str
    email: str | None = None
    phone: str | None = None


@dataclass(frozen=True)
class Meta:
    id: str
    name: str
    version: int
    created: datetime
    modified: datetime
    language: str
    hash: str = ""


@dataclass(frozen=True)
class Controller:
    name: str
    address: str
    country: str
    representative: ContactPoint | None = None


@dataclass(frozen=True)
class Purpose:
    description: str
    legal_basis: str
    legitimate_interest: str | None = None


@dataclass(frozen=True)
class Recipient:
    name: str
    category: str
    country: str


@dataclass(frozen=True)
class Storage:
    kind: str
    value: str


@dataclass(frozen=True)
class DataDisclosed:
    category: str
    purposes: tuple[Purpose, ...] = ()
    recipients: tuple[Recipient, ...] = ()
    storage: Storage | None = None
    requirement_note: str | None = None


@dataclass(frozen=True)
class ThirdCountryTransfer:
    country: str
    adequacy_decision: bool
    safeguards: str | None = None


@dataclass(frozen=True)
class RightEntry:
    available: bool
    description: str | None = None


@dataclass(frozen=True)
class RightsInfo:
    access: RightEntry | None = None
    rectification: RightEntry | None = None
    erasure: RightEntry | None = None
    restriction: RightEntry | None = None
    portability: RightEntry | None = None
    objection: RightEntry | None = None
    withdraw_consent: RightEntry | None = None
    complaint_authority: ContactPoint | None = None

    def entry(self, key: str) -> RightEntry | None:
        """Right entry by wire key, e.g. ``withdrawConsent``."""
        attr = {"withdrawConsent": "withdraw_consent"}.get(key, key)
        return getattr(self, attr)


@dataclass(frozen=True)
class AdmInfo:
    in_use: bool
    logic_description: str | None = None
    consequences: str | None = None


@dataclass(frozen=True)
class TiltDocument:
    meta: Meta
    controller: Controller
    dpo: ContactPoint | None = None
    data_disclosed: tuple[DataDisclosed, ...] = ()
    third_country_transfers: tuple[ThirdCountryTransfer, ...] = ()
    rights: RightsInfo = field(default_factory=RightsInfo)
    automated_decision_making: AdmInfo | None = None
    sources: tuple[str, ...] = ()
