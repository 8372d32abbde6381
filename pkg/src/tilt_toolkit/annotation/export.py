"""Export a completed annotation task as a transparency document.

The mapping is lossy but valid: every field is derived from annotated
excerpts with conservative heuristics (line-split names, regex contact
extraction, country lookup by name or code token), and anything that
cannot be derived is omitted rather than guessed. The result always
passes document validation; gaps then surface as completeness findings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import lru_cache

from ..core import codec, model
from ..core.countries import codes_by_name, is_alpha2
from ..errors import TaskNotDoneError, ValidationError
from .flow import AnnotationTask, PolicyText, STATUS_DONE

__all__ = ["ExportSeed", "export_tilt"]

_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
_PHONE_RE = re.compile(r"\+?\d[\d\s()/.-]{5,}\d")
_BASIS_RE = re.compile(r"GDPR-\d+-\d+-[a-z]")
# German statute citations, e.g. "Art. 6 Abs. 1 lit. f DSGVO"
_DE_BASIS_RE = re.compile(r"Art\.?\s*(\d+)\s*Abs\.?\s*(\d+)\s*lit\.?\s*([a-z])", re.IGNORECASE)
_CODE_TOKEN_RE = re.compile(r"\b[A-Z]{2}\b")
_ADEQUACY_RE = re.compile(r"adequacy|angemessenheit", re.IGNORECASE)
_SAFEGUARD_RE = re.compile(
    r"standard contractual clauses|standardvertragsklauseln|\bscc\b|safeguard|garantien",
    re.IGNORECASE,
)

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class ExportSeed:
    """Document metadata the annotations themselves cannot provide."""

    id: str
    name: str
    language: str = "en"
    country: str = "DE"


@lru_cache(maxsize=1)
def _country_patterns() -> tuple[tuple[re.Pattern, str], ...]:
    # longest names first so "Korea, Republic of" beats a bare "Korea"
    items = sorted(codes_by_name().items(), key=lambda kv: (-len(kv[0]), kv[0]))
    return tuple(
        (re.compile(rf"\b{re.escape(name)}\b", re.IGNORECASE), code) for name, code in items
    )


def _extract_country(text: str) -> str | None:
    for pattern, code in _country_patterns():
        if pattern.search(text):
            return code
    for token in _CODE_TOKEN_RE.findall(text):
        if is_alpha2(token):
            return token
    return None


def _first_line(text: str) -> str:
    for line in text.splitlines():
        cleaned = line.strip().strip(",;:")
        if cleaned:
            return cleaned
    return ""


def _contact(excerpt: str) -> model.ContactPoint | None:
    email = _EMAIL_RE.search(excerpt)
    phone = _PHONE_RE.search(excerpt)
    if email is None and phone is None:
        return None
    return model.ContactPoint(
        name=_first_line(excerpt),
        email=email.group(0) if email else None,
        phone=phone.group(0) if phone else None,
    )


def _excerpts(task: AnnotationTask, field: str) -> list[str]:
    answer = task.answer(field)
    if answer is None or not answer.present:
        return []
    return [entry.excerpt for entry in task.annotations if entry.field == field]


def _controller(task: AnnotationTask, seed: ExportSeed) -> model.Controller:
    excerpts = _excerpts(task, "controllerIdentity")
    name = ""
    address = ""
    country = None
    if excerpts:
        joined = "\n".join(excerpts)
        lines = [line.strip().strip(",;") for line in joined.splitlines() if line.strip()]
        if len(lines) >= 2:
            name, address = lines[0], " ".join(lines[1:])
        else:
            head, _, tail = lines[0].partition(",")
            name, address = head.strip(), tail.strip()
        country = _extract_country(joined)
    representative = None
    for excerpt in _excerpts(task, "controllerRepresentative"):
        representative = _contact(excerpt)
        if representative is not None:
            break
    return model.Controller(
        name=name,
        address=address,
        country=country if country is not None else seed.country,
        representative=representative,
    )


def _legal_bases(task: AnnotationTask) -> list[str]:
    bases = []
    for excerpt in _excerpts(task, "legalBases"):
        found = _BASIS_RE.findall(excerpt)
        found += [
            f"GDPR-{art}-{para}-{lit.lower()}"
            for art, para, lit in _DE_BASIS_RE.findall(excerpt)
        ]
        bases.extend(found if found else [" ".join(excerpt.split())])
    return bases


def _purposes(task: AnnotationTask) -> tuple[model.Purpose, ...]:
    descriptions = [" ".join(e.split()) for e in _excerpts(task, "purposes")]
    descriptions = [d for d in descriptions if d]
    bases = _legal_bases(task)
    interests = [" ".join(e.split()) for e in _excerpts(task, "legitimateInterests")]
    interest = next((text for text in interests if text), None)
    purposes = []
    for i, description in enumerate(descriptions):
        basis = bases[min(i, len(bases) - 1)] if bases else ""
        purposes.append(
            model.Purpose(
                description=description,
                legal_basis=basis,
                legitimate_interest=interest if basis == "GDPR-6-1-f" else None,
            )
        )
    return tuple(purposes)


def _recipients(task: AnnotationTask, seed: ExportSeed) -> tuple[model.Recipient, ...]:
    recipients = []
    for excerpt in _excerpts(task, "recipients"):
        name = _first_line(excerpt)
        if not name:
            continue
        country = _extract_country(excerpt)
        recipients.append(
            model.Recipient(
                name=name,
                category="unspecified",
                country=country if country is not None else seed.country,
            )
        )
    return tuple(recipients)


def _storage(task: AnnotationTask) -> model.Storage | None:
    for excerpt in _excerpts(task, "storagePeriods"):
        trimmed = excerpt.strip()
        if not trimmed:
            continue
        if codec.is_iso_duration(trimmed):
            return model.Storage(kind=model.STORAGE_DURATION, value=trimmed)
        return model.Storage(kind=model.STORAGE_CRITERION, value=" ".join(trimmed.split()))
    return None


def _categories(task: AnnotationTask, seed: ExportSeed) -> tuple[model.DataDisclosed, ...]:
    names = []
    for excerpt in _excerpts(task, "dataCategories"):
        name = " ".join(excerpt.split())
        if name:
            names.append(name)
    if not names:
        return ()
    purposes = _purposes(task)
    recipients = _recipients(task, seed)
    storage = _storage(task)
    notes = [" ".join(e.split()) for e in _excerpts(task, "requirementNotes")]
    note = next((text for text in notes if text), None)
    # per-category detail questions are asked once for the whole policy,
    # so their answers apply to every disclosed category
    return tuple(
        model.DataDisclosed(
            category=name,
            purposes=purposes,
            recipients=recipients,
            storage=storage,
            requirement_note=note,
        )
        for name in names
    )


def _transfers(task: AnnotationTask, seed: ExportSeed) -> tuple[model.ThirdCountryTransfer, ...]:
    transfers = []
    for excerpt in _excerpts(task, "thirdCountryTransfers"):
        country = _extract_country(excerpt)
        transfers.append(
            model.ThirdCountryTransfer(
                country=country if country is not None else seed.country,
                adequacy_decision=bool(_ADEQUACY_RE.search(excerpt)),
                safeguards=" ".join(excerpt.split()) if _SAFEGUARD_RE.search(excerpt) else None,
            )
        )
    return tuple(transfers)


def _rights(task: AnnotationTask) -> model.RightsInfo:
    entries: dict[str, model.RightEntry] = {}
    if _excerpts(task, "rightsCatalog"):
        for key in model.CORE_RIGHT_KEYS:
            entries[model.snake_right(key)] = model.RightEntry(available=True)
    if _excerpts(task, "withdrawConsent"):
        entries["withdraw_consent"] = model.RightEntry(available=True)
    authority = None
    for excerpt in _excerpts(task, "complaintAuthority"):
        authority = _contact(excerpt)
        if authority is not None:
            break
    return model.RightsInfo(complaint_authority=authority, **entries)


def export_tilt(
    task: AnnotationTask, seed: ExportSeed, source_url: str | None = None
) -> model.TiltDocument:
    """Map a done task onto a document; never fails validation."""
    if task.status != STATUS_DONE:
        raise TaskNotDoneError(f"task {task.id} still has open questions")
    if not seed.id:
        raise ValidationError("must be non-empty text", "id")
    if not re.fullmatch(r"[a-z]{2}", seed.language):
        raise ValidationError("must be a 2-letter ISO 639-1 code", "language")
    if not is_alpha2(seed.country):
        raise ValidationError("must be an ISO 3166-1 alpha-2 code", "country")

    stamps = [entry.at for entry in task.annotations]
    adm = None
    adm_excerpts = _excerpts(task, "automatedDecisionMaking")
    if adm_excerpts:
        adm = model.AdmInfo(in_use=True, logic_description=" ".join(adm_excerpts[0].split()))
    doc = model.TiltDocument(
        meta=model.Meta(
            id=seed.id,
            name=seed.name,
            version=1,
            created=min(stamps) if stamps else _EPOCH,
            modified=max(stamps) if stamps else _EPOCH,
            language=seed.language,
        ),
        controller=_controller(task, seed),
        dpo=next(filter(None, map(_contact, _excerpts(task, "dpoContact"))), None),
        data_disclosed=_categories(task, seed),
        third_country_transfers=_transfers(task, seed),
        rights=_rights(task),
        automated_decision_making=adm,
        sources=(source_url,) if source_url else (),
    )
    # round-trip through the validator so the export contract holds even
    # if a heuristic above regresses
    return codec.document_from_tree(codec.document_to_tree(doc))


def export_seed_from_tree(tree: object, policy: PolicyText, task: AnnotationTask) -> ExportSeed:
    """Build a seed from an optional request body, with derived defaults."""
    if tree is None:
        tree = {}
    if not isinstance(tree, dict):
        raise ValidationError("must be an object", "")
    for key in tree:
        if key not in {"docId", "docName", "language", "country"}:
            raise ValidationError("unknown field", key)
    return ExportSeed(
        id=str(tree.get("docId", f"tilt-{task.id}")),
        name=str(tree.get("docName", policy.id)),
        language=str(tree.get("language", "en")),
        country=str(tree.get("country", "DE")),
    )
