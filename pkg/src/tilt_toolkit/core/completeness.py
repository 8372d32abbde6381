"""Art. 13/14 completeness checklist over a parsed document.

The checker is a fixed table of 14 rules, C01 through C14. Every report
contains exactly these items in order. Conditional rules resolve to
``not-applicable`` while their trigger is absent; collection rules over
``dataDisclosed`` count as missing when the document discloses no
categories at all, since an empty disclosure informs about nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import model
from .countries import eu_eea_members

__all__ = [
    "CHECKLIST_KEYS",
    "MISSING",
    "NOT_APPLICABLE",
    "PRESENT",
    "CompletenessItem",
    "CompletenessReport",
    "check_completeness",
    "report_to_tree",
]

PRESENT = "present"
MISSING = "missing"
NOT_APPLICABLE = "not-applicable"

BASIS_LEGITIMATE_INTEREST = "GDPR-6-1-f"
BASIS_CONSENT = "GDPR-6-1-a"


@dataclass(frozen=True)
class CompletenessItem:
    key: str
    status: str
    evidence_path: str | None = None


@dataclass(frozen=True)
class CompletenessReport:
    items: tuple[CompletenessItem, ...]

    def item(self, key: str) -> CompletenessItem:
        for entry in self.items:
            if entry.key == key:
                return entry
        raise KeyError(key)

    def missing(self) -> tuple[str, ...]:
        return tuple(entry.key for entry in self.items if entry.status == MISSING)

    def complete(self) -> bool:
        return not self.missing()


def _present(path: str) -> CompletenessItem:
    # key field is filled in by the dispatch loop
    return CompletenessItem("", PRESENT, path)


_MISSING = CompletenessItem("", MISSING)
_NOT_APPLICABLE = CompletenessItem("", NOT_APPLICABLE)


def _purposes(doc: model.TiltDocument) -> list[model.Purpose]:
    return [purpose for entry in doc.data_disclosed for purpose in entry.purposes]


def _c01_controller(doc: model.TiltDocument) -> CompletenessItem:
    if doc.controller.name and doc.controller.address:
        return _present("controller")
    return _MISSING


def _c02_representative(doc: model.TiltDocument) -> CompletenessItem:
    if doc.controller.country in eu_eea_members():
        return _NOT_APPLICABLE
    if doc.controller.representative is not None:
        return _present("controller/representative")
    return _MISSING


def _c03_dpo(doc: model.TiltDocument) -> CompletenessItem:
    # whether a DPO is mandatory depends on facts outside the document,
    # so absence is not counted against it
    if doc.dpo is not None:
        return _present("dpo")
    return _NOT_APPLICABLE


def _c04_purposes(doc: model.TiltDocument) -> CompletenessItem:
    if doc.data_disclosed and all(entry.purposes for entry in doc.data_disclosed):
        return _present("dataDisclosed")
    return _MISSING


def _c05_legal_bases(doc: model.TiltDocument) -> CompletenessItem:
    purposes = _purposes(doc)
    if purposes and all(purpose.legal_basis for purpose in purposes):
        return _present("dataDisclosed")
    return _MISSING


def _c06_legitimate_interest(doc: model.TiltDocument) -> CompletenessItem:
    triggered = False
    evidence: str | None = None
    for i, entry in enumerate(doc.data_disclosed):
        for j, purpose in enumerate(entry.purposes):
            if purpose.legal_basis != BASIS_LEGITIMATE_INTEREST:
                continue
            triggered = True
            if not purpose.legitimate_interest:
                return _MISSING
            if evidence is None:
                evidence = f"dataDisclosed/{i}/purposes/{j}/legitimateInterest"
    if not triggered:
        return _NOT_APPLICABLE
    assert evidence is not None
    return _present(evidence)


def _c07_recipients(doc: model.TiltDocument) -> CompletenessItem:
    if doc.data_disclosed and all(entry.recipients for entry in doc.data_disclosed):
        return _present("dataDisclosed")
    return _MISSING


def _c08_transfers(doc: model.TiltDocument) -> CompletenessItem:
    if not doc.third_country_transfers:
        return _NOT_APPLICABLE
    for transfer in doc.third_country_transfers:
        if not transfer.adequacy_decision and not transfer.safeguards:
            return _MISSING
    return _present("thirdCountryTransfers")


def _c09_storage(doc: model.TiltDocument) -> CompletenessItem:
    if doc.data_disclosed and all(entry.storage is not None for entry in doc.data_disclosed):
        return _present("dataDisclosed")
    return _MISSING


def _c10_rights(doc: model.TiltDocument) -> CompletenessItem:
    if all(doc.rights.entry(key) is not None for key in model.CORE_RIGHT_KEYS):
        return _present("rights")
    return _MISSING


def _c11_withdraw_consent(doc: model.TiltDocument) -> CompletenessItem:
    if not any(purpose.legal_basis == BASIS_CONSENT for purpose in _purposes(doc)):
        return _NOT_APPLICABLE
    if doc.rights.withdraw_consent is not None:
        return _present("rights/withdrawConsent")
    return _MISSING


def _c12_complaint_authority(doc: model.TiltDocument) -> CompletenessItem:
    if doc.rights.complaint_authority is not None:
        return _present("rights/complaintAuthority")
    return _MISSING


def _c13_requirement_notes(doc: model.TiltDocument) -> CompletenessItem:
    if not doc.data_disclosed:
        return _NOT_APPLICABLE
    if all(entry.requirement_note for entry in doc.data_disclosed):
        return _present("dataDisclosed")
    return _MISSING


def _c14_adm(doc: model.TiltDocument) -> CompletenessItem:
    adm = doc.automated_decision_making
    if adm is None:
        return _NOT_APPLICABLE
    if adm.in_use and not adm.logic_description:
        return _MISSING
    return _present("automatedDecisionMaking")


_RULES: tuple[tuple[str, Callable[[model.TiltDocument], CompletenessItem]], ...] = (
    ("C01", _c01_controller),
    ("C02", _c02_representative),
    ("C03", _c03_dpo),
    ("C04", _c04_purposes),
    ("C05", _c05_legal_bases),
    ("C06", _c06_legitimate_interest),
    ("C07", _c07_recipients),
    ("C08", _c08_transfers),
    ("C09", _c09_storage),
    ("C10", _c10_rights),
    ("C11", _c11_withdraw_consent),
    ("C12", _c12_complaint_authority),
    ("C13", _c13_requirement_notes),
    ("C14", _c14_adm),
)

CHECKLIST_KEYS = tuple(key for key, _ in _RULES)


def check_completeness(doc: model.TiltDocument) -> CompletenessReport:
    """Evaluate all 14 checklist rules; pure and deterministic."""
    items = []
    for key, rule in _RULES:
        result = rule(doc)
        items.append(CompletenessItem(key, result.status, result.evidence_path))
    return CompletenessReport(items=tuple(items))


def report_to_tree(report: CompletenessReport) -> dict:
    items = []
    for entry in report.items:
        item: dict[str, object] = {"key": entry.key, "status": entry.status}
        if entry.evidence_path is not None:
            item["evidencePath"] = entry.evidence_path
        items.append(item)
    return {"items": items, "missing": list(report.missing())}
