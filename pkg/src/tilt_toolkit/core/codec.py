"""Wire format for transparency documents.

Covers the full path between document text and typed values: strict
parsing and validation, serialization back to plain JSON trees,
canonical byte form, and the content hash. Field names on the wire are
lowerCamelCase; paths in errors and diffs are slash-separated with
zero-based array indices (``dataDisclosed/0/category``).
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import replace
from datetime import datetime, timezone
from typing import Any

from ..errors import TiltSyntaxError, ValidationError
from . import model
from .countries import is_alpha2

__all__ = [
    "canonical_json",
    "canonicalize",
    "compute_hash",
    "document_from_tree",
    "document_to_tree",
    "format_timestamp",
    "is_iso_duration",
    "is_normative_basis",
    "parse",
    "parse_timestamp",
    "with_hash",
]

# RFC 3339 restricted to UTC; offsets other than Z/+00:00 are rejected
# so that every stored timestamp has a single textual form.
_TIMESTAMP_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(?:\.\d{1,6})?(?:Z|\+00:00)$")

# ISO 8601 duration; weeks may not be combined with other designators.
_DURATION_RE = re.compile(
    r"^P(?:\d+W|(?=.)(?:\d+Y)?(?:\d+M)?(?:\d+D)?(?:T(?=\d)(?:\d+H)?(?:\d+M)?(?:\d+(?:\.\d+)?S)?)?)$"
)

# Normative legal-basis references, e.g. GDPR-6-1-a. Anything else is
# accepted as free text but does not trigger the conditional checks.
_BASIS_RE = re.compile(r"^GDPR-\d+-\d+-[a-z]$")

_LANGUAGE_RE = re.compile(r"^[a-z]{2}$")
_HASH_RE = re.compile(r"^[0-9a-f]{64}$")


def parse_timestamp(text: str, path: str) -> datetime:
    if not isinstance(text, str) or not _TIMESTAMP_RE.match(text):
        raise ValidationError("must be an RFC 3339 UTC timestamp", path)
    try:
        moment = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ValidationError(f"invalid timestamp: {exc}", path) from exc
    return moment.astimezone(timezone.utc)


def format_timestamp(moment: datetime) -> str:
    moment = moment.astimezone(timezone.utc)
    base = moment.strftime("%Y-%m-%dT%H:%M:%S")
    if moment.microsecond:
        return f"{base}.{moment.microsecond:06d}Z"
    return f"{base}Z"


def is_iso_duration(text: str) -> bool:
    return bool(_DURATION_RE.match(text))


def is_normative_basis(text: str) -> bool:
    return bool(_BASIS_RE.match(text))


# --- reading: plain trees to typed values --------------------------------


def _join(path: str, key: str) -> str:
    return f"{path}/{key}" if path else key


def _object(value: Any, allowed: frozenset[str], path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError("must be an object", path)
    for key in value:
        if key not in allowed:
            raise ValidationError("unknown field", _join(path, key))
    return value


def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise ValidationError("required field is missing", _join(path, key))
    return obj[key]


def _text(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ValidationError("must be text", path)
    return value


def _nonempty_text(value: Any, path: str) -> str:
    text = _text(value, path)
    if not text:
        raise ValidationError("must be non-empty text", path)
    return text


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ValidationError("must be a boolean", path)
    return value


def _array(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError("must be an array", path)
    return value


def _country(value: Any, path: str) -> str:
    code = _text(value, path)
    if not is_alpha2(code):
        raise ValidationError("must be an ISO 3166-1 alpha-2 code", path)
    return code


_META_KEYS = frozenset({"id", "name", "version", "created", "modified", "language", "hash"})


def _meta_from(value: Any, path: str) -> model.Meta:
    obj = _object(value, _META_KEYS, path)
    version = _require(obj, "version", path)
    # bool is an int subclass and must not slip through as a version
    if isinstance(version, bool) or not isinstance(version, int) or version < 1:
        raise ValidationError("must be an integer >= 1", _join(path, "version"))
    language = _text(_require(obj, "language", path), _join(path, "language"))
    if not _LANGUAGE_RE.match(language):
        raise ValidationError("must be a 2-letter ISO 639-1 code", _join(path, "language"))
    digest = _text(obj.get("hash", ""), _join(path, "hash"))
    if digest and not _HASH_RE.match(digest):
        raise ValidationError("must be empty or 64 lowercase hex characters", _join(path, "hash"))
    created = parse_timestamp(_require(obj, "created", path), _join(path, "created"))
    modified = parse_timestamp(_require(obj, "modified", path), _join(path, "modified"))
    if modified < created:
        raise ValidationError("must not precede created", _join(path, "modified"))
    return model.Meta(
        id=_nonempty_text(_require(obj, "id", path), _join(path, "id")),
        name=_text(_require(obj, "name", path), _join(path, "name")),
        version=version,
        created=created,
        modified=modified,
        language=language,
        hash=digest,
    )


_CONTACT_KEYS = frozenset({"name", "email", "phone"})


def _contact_from(value: Any, path: str) -> model.ContactPoint:
    obj = _object(value, _CONTACT_KEYS, path)
    contact = model.ContactPoint(
        name=_text(_require(obj, "name", path), _join(path, "name")),
        email=_text(obj["email"], _join(path, "email")) if "email" in obj else None,
        phone=_text(obj["phone"], _join(path, "phone")) if "phone" in obj else None,
    )
    if contact.email is None and contact.phone is None:
        raise ValidationError("needs at least one of email/phone", path)
    return contact


_CONTROLLER_KEYS = frozenset({"name", "address", "country", "representative"})


def _controller_from(value: Any, path: str) -> model.Controller:
    obj = _object(value, _CONTROLLER_KEYS, path)
    representative = None
    if "representative" in obj:
        representative = _contact_from(obj["representative"], _join(path, "representative"))
    return model.Controller(
        name=_text(_require(obj, "name", path), _join(path, "name")),
        address=_text(_require(obj, "address", path), _join(path, "address")),
        country=_country(_require(obj, "country", path), _join(path, "country")),
        representative=representative,
    )


_PURPOSE_KEYS = frozenset({"description", "legalBasis", "legitimateInterest"})


def _purpose_from(value: Any, path: str) -> model.Purpose:
    obj = _object(value, _PURPOSE_KEYS, path)
    interest = None
    if "legitimateInterest" in obj:
        interest = _text(obj["legitimateInterest"], _join(path, "legitimateInterest"))
    return model.Purpose(
        description=_text(_require(obj, "description", path), _join(path, "description")),
        legal_basis=_text(_require(obj, "legalBasis", path), _join(path, "legalBasis")),
        legitimate_interest=interest,
    )


_RECIPIENT_KEYS = frozenset({"name", "category", "country"})


def _recipient_from(value: Any, path: str) -> model.Recipient:
    obj = _object(value, _RECIPIENT_KEYS, path)
    return model.Recipient(
        name=_text(_require(obj, "name", path), _join(path, "name")),
        category=_text(_require(obj, "category", path), _join(path, "category")),
        country=_country(_require(obj, "country", path), _join(path, "country")),
    )


_STORAGE_KEYS = frozenset({"kind", "value"})


def _storage_from(value: Any, path: str) -> model.Storage:
    obj = _object(value, _STORAGE_KEYS, path)
    kind = _text(_require(obj, "kind", path), _join(path, "kind"))
    if kind not in model.STORAGE_KINDS:
        raise ValidationError("must be one of duration|criterion", _join(path, "kind"))
    text = _nonempty_text(_require(obj, "value", path), _join(path, "value"))
    if kind == model.STORAGE_DURATION and not is_iso_duration(text):
        raise ValidationError("must be an ISO 8601 duration", _join(path, "value"))
    return model.Storage(kind=kind, value=text)


_CATEGORY_KEYS = frozenset({"category", "purposes", "recipients", "storage", "requirementNote"})


def _category_from(value: Any, path: str) -> model.DataDisclosed:
    obj = _object(value, _CATEGORY_KEYS, path)
    purposes = tuple(
        _purpose_from(item, _join(path, f"purposes/{i}"))
        for i, item in enumerate(_array(obj.get("purposes", []), _join(path, "purposes")))
    )
    recipients = tuple(
        _recipient_from(item, _join(path, f"recipients/{i}"))
        for i, item in enumerate(_array(obj.get("recipients", []), _join(path, "recipients")))
    )
    note = None
    if "requirementNote" in obj:
        note = _text(obj["requirementNote"], _join(path, "requirementNote"))
    return model.DataDisclosed(
        category=_nonempty_text(_require(obj, "category", path), _join(path, "category")),
        purposes=purposes,
        recipients=recipients,
        storage=_storage_from(obj["storage"], _join(path, "storage")) if "storage" in obj else None,
        requirement_note=note,
    )


_TRANSFER_KEYS = frozenset({"country", "adequacyDecision", "safeguards"})


def _transfer_from(value: Any, path: str) -> model.ThirdCountryTransfer:
    obj = _object(value, _TRANSFER_KEYS, path)
    safeguards = None
    if "safeguards" in obj:
        safeguards = _text(obj["safeguards"], _join(path, "safeguards"))
    return model.ThirdCountryTransfer(
        country=_country(_require(obj, "country", path), _join(path, "country")),
        adequacy_decision=_boolean(
            _require(obj, "adequacyDecision", path), _join(path, "adequacyDecision")
        ),
        safeguards=safeguards,
    )


_RIGHT_KEYS_INNER = frozenset({"available", "description"})


def _right_from(value: Any, path: str) -> model.RightEntry:
    obj = _object(value, _RIGHT_KEYS_INNER, path)
    description = None
    if "description" in obj:
        description = _text(obj["description"], _join(path, "description"))
    return model.RightEntry(
        available=_boolean(_require(obj, "available", path), _join(path, "available")),
        description=description,
    )


_RIGHTS_KEYS = frozenset(model.RIGHT_KEYS) | {"complaintAuthority"}


def _rights_from(value: Any, path: str) -> model.RightsInfo:
    obj = _object(value, _RIGHTS_KEYS, path)
    entries = {
        model.snake_right(key): _right_from(obj[key], _join(path, key))
        for key in model.RIGHT_KEYS
        if key in obj
    }
    authority = None
    if "complaintAuthority" in obj:
        authority = _contact_from(obj["complaintAuthority"], _join(path, "complaintAuthority"))
    return model.RightsInfo(complaint_authority=authority, **entries)


_ADM_KEYS = frozenset({"inUse", "logicDescription", "consequences"})


def _adm_from(value: Any, path: str) -> model.AdmInfo:
    obj = _object(value, _ADM_KEYS, path)
    logic = None
    if "logicDescription" in obj:
        logic = _text(obj["logicDescription"], _join(path, "logicDescription"))
    consequences = None
    if "consequences" in obj:
        consequences = _text(obj["consequences"], _join(path, "consequences"))
    return model.AdmInfo(
        in_use=_boolean(_require(obj, "inUse", path), _join(path, "inUse")),
        logic_description=logic,
        consequences=consequences,
    )


_DOCUMENT_KEYS = frozenset(
    {
        "meta",
        "controller",
        "dpo",
        "dataDisclosed",
        "thirdCountryTransfers",
        "rights",
        "automatedDecisionMaking",
        "sources",
    }
)


def document_from_tree(tree: Any) -> model.TiltDocument:
    """Validate a plain JSON tree and build the typed document.

    Raises ValidationError naming the offending field path; a non-empty
    meta.hash must match the recomputed content hash.
    """
    obj = _object(tree, _DOCUMENT_KEYS, "")
    adm = None
    if "automatedDecisionMaking" in obj:
        adm = _adm_from(obj["automatedDecisionMaking"], "automatedDecisionMaking")
    doc = model.TiltDocument(
        meta=_meta_from(_require(obj, "meta", ""), "meta"),
        controller=_controller_from(_require(obj, "controller", ""), "controller"),
        dpo=_contact_from(obj["dpo"], "dpo") if "dpo" in obj else None,
        data_disclosed=tuple(
            _category_from(item, f"dataDisclosed/{i}")
            for i, item in enumerate(_array(obj.get("dataDisclosed", []), "dataDisclosed"))
        ),
        third_country_transfers=tuple(
            _transfer_from(item, f"thirdCountryTransfers/{i}")
            for i, item in enumerate(
                _array(obj.get("thirdCountryTransfers", []), "thirdCountryTransfers")
            )
        ),
        rights=_rights_from(obj.get("rights", {}), "rights"),
        automated_decision_making=adm,
        sources=tuple(
            _text(item, f"sources/{i}")
            for i, item in enumerate(_array(obj.get("sources", []), "sources"))
        ),
    )
    if doc.meta.hash and doc.meta.hash != compute_hash(doc):
        raise ValidationError("does not match document content", "meta/hash")
    return doc


def parse(text: str) -> model.TiltDocument:
    """Parse document text, distinguishing syntax from schema failures."""
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TiltSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    return document_from_tree(tree)


# --- writing: typed values to plain trees --------------------------------


def _contact_tree(contact: model.ContactPoint) -> dict:
    tree: dict[str, Any] = {"name": contact.name}
    if contact.email is not None:
        tree["email"] = contact.email
    if contact.phone is not None:
        tree["phone"] = contact.phone
    return tree


def _category_tree(entry: model.DataDisclosed) -> dict:
    tree: dict[str, Any] = {
        "category": entry.category,
        "purposes": [],
        "recipients": [],
    }
    for purpose in entry.purposes:
        item: dict[str, Any] = {
            "description": purpose.description,
            "legalBasis": purpose.legal_basis,
        }
        if purpose.legitimate_interest is not None:
            item["legitimateInterest"] = purpose.legitimate_interest
        tree["purposes"].append(item)
    for recipient in entry.recipients:
        tree["recipients"].append(
            {"name": recipient.name, "category": recipient.category, "country": recipient.country}
        )
    if entry.storage is not None:
        tree["storage"] = {"kind": entry.storage.kind, "value": entry.storage.value}
    if entry.requirement_note is not None:
        tree["requirementNote"] = entry.requirement_note
    return tree


def _rights_tree(rights: model.RightsInfo) -> dict:
    tree: dict[str, Any] = {}
    for key in model.RIGHT_KEYS:
        entry = rights.entry(key)
        if entry is None:
            continue
        item: dict[str, Any] = {"available": entry.available}
        if entry.description is not None:
            item["description"] = entry.description
        tree[key] = item
    if rights.complaint_authority is not None:
        tree["complaintAuthority"] = _contact_tree(rights.complaint_authority)
    return tree


def document_to_tree(doc: model.TiltDocument) -> dict:
    """Serialize to a plain JSON tree; absent optionals are omitted."""
    meta = {
        "id": doc.meta.id,
        "name": doc.meta.name,
        "version": doc.meta.version,
        "created": format_timestamp(doc.meta.created),
        "modified": format_timestamp(doc.meta.modified),
        "language": doc.meta.language,
        "hash": doc.meta.hash,
    }
    controller: dict[str, Any] = {
        "name": doc.controller.name,
        "address": doc.controller.address,
        "country": doc.controller.country,
    }
    if doc.controller.representative is not None:
        controller["representative"] = _contact_tree(doc.controller.representative)
    tree: dict[str, Any] = {"meta": meta, "controller": controller}
    if doc.dpo is not None:
        tree["dpo"] = _contact_tree(doc.dpo)
    tree["dataDisclosed"] = [_category_tree(entry) for entry in doc.data_disclosed]
    transfers = []
    for transfer in doc.third_country_transfers:
        item: dict[str, Any] = {
            "country": transfer.country,
            "adequacyDecision": transfer.adequacy_decision,
        }
        if transfer.safeguards is not None:
            item["safeguards"] = transfer.safeguards
        transfers.append(item)
    tree["thirdCountryTransfers"] = transfers
    tree["rights"] = _rights_tree(doc.rights)
    if doc.automated_decision_making is not None:
        adm: dict[str, Any] = {"inUse": doc.automated_decision_making.in_use}
        if doc.automated_decision_making.logic_description is not None:
            adm["logicDescription"] = doc.automated_decision_making.logic_description
        if doc.automated_decision_making.consequences is not None:
            adm["consequences"] = doc.automated_decision_making.consequences
        tree["automatedDecisionMaking"] = adm
    tree["sources"] = list(doc.sources)
    return tree


# --- canonical form and content hash -------------------------------------


def canonical_json(tree: Any) -> str:
    # all wire names are ASCII, so Python's str ordering used by
    # sort_keys coincides with bytewise UTF-8 ordering
    return json.dumps(tree, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonicalize(doc: model.TiltDocument) -> str:
    """Deterministic text form; meta.hash is emitted blank."""
    tree = document_to_tree(doc)
    tree["meta"]["hash"] = ""
    return canonical_json(tree)


def compute_hash(doc: model.TiltDocument) -> str:
    """SHA-256 hex digest over the canonical UTF-8 bytes."""
    return hashlib.sha256(canonicalize(doc).encode("utf-8")).hexdigest()


def with_hash(doc: model.TiltDocument) -> model.TiltDocument:
    """Copy of the document with meta.hash set to its content hash."""
    return replace(doc, meta=replace(doc.meta, hash=compute_hash(doc)))
