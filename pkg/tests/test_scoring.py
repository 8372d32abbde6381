"""Penalty table, labels, and summary card."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

import docgen
from tilt_toolkit.core import check_completeness, model
from tilt_toolkit.errors import ValidationError
from tilt_toolkit.scoring import (
    GREEN,
    RED,
    YELLOW,
    ExternalSignals,
    card_to_tree,
    compute_score,
    report_to_tree,
    signals_from_tree,
    summarize,
)


@pytest.fixture(scope="module")
def clean_doc(complete_doc):
    """Fully disclosed document with no transfers and no ADM."""
    doc = replace(complete_doc, third_country_transfers=(), automated_decision_making=None)
    assert check_completeness(doc).missing() == ()
    return doc


def test_no_rule_fires(clean_doc):
    report = compute_score(clean_doc, ExternalSignals())
    assert (report.score, report.label, report.breakdown) == (100, GREEN, ())
    assert report.raw_score == 100


def test_phishing_alone(clean_doc):
    report = compute_score(clean_doc, ExternalSignals(phishing_flagged=True))
    assert [(e.code, e.points) for e in report.breakdown] == [("PHISH", -50)]
    assert (report.score, report.label) == (50, YELLOW)


def test_trackers_transfer_and_tosdr(clean_doc):
    transfer = model.ThirdCountryTransfer(country="US", adequacy_decision=False)
    doc = replace(clean_doc, third_country_transfers=(transfer,))
    signals = ExternalSignals(tracker_count=12, tosdr_grade="E")
    report = compute_score(doc, signals)
    assert [(e.code, e.points) for e in report.breakdown] == [
        ("TRACKERS", -40),
        ("TRANSFER", -10),
        ("TOSDR", -10),
    ]
    assert (report.score, report.label) == (40, YELLOW)


def test_tracker_penalty_scales_then_caps(clean_doc):
    for count, penalty in ((0, 0), (1, -4), (9, -36), (10, -40), (50, -40)):
        report = compute_score(clean_doc, ExternalSignals(tracker_count=count))
        points = {e.code: e.points for e in report.breakdown}
        assert points.get("TRACKERS", 0) == penalty


def test_transfer_penalty_caps_at_two(clean_doc):
    bare = model.ThirdCountryTransfer(country="BR", adequacy_decision=False)
    for n, penalty in ((1, -10), (2, -20), (4, -20)):
        doc = replace(clean_doc, third_country_transfers=(bare,) * n)
        report = compute_score(doc, ExternalSignals())
        points = {e.code: e.points for e in report.breakdown}
        assert points["TRANSFER"] == penalty
    adequate = model.ThirdCountryTransfer(country="JP", adequacy_decision=True)
    report = compute_score(replace(clean_doc, third_country_transfers=(adequate,)), ExternalSignals())
    assert all(e.code != "TRANSFER" for e in report.breakdown)


def test_adm_opaque_penalty(clean_doc):
    opaque = replace(clean_doc, automated_decision_making=model.AdmInfo(in_use=True))
    report = compute_score(opaque, ExternalSignals())
    assert {e.code: e.points for e in report.breakdown} == {"ADM_OPAQUE": -10}
    explained = replace(
        clean_doc,
        automated_decision_making=model.AdmInfo(in_use=True, logic_description="thresholds"),
    )
    assert compute_score(explained, ExternalSignals()).breakdown == ()


def test_missing_penalty_counts_checklist_gaps(minimal_doc):
    report = compute_score(minimal_doc, ExternalSignals())
    points = {e.code: e.points for e in report.breakdown}
    assert points == {"MISSING": -12}
    assert report.score == 88


def test_missing_penalty_cap(minimal_doc):
    bare = model.ThirdCountryTransfer(country="US", adequacy_decision=False)
    opaque = model.AdmInfo(in_use=True)
    doc = replace(minimal_doc, third_country_transfers=(bare,), automated_decision_making=opaque)
    missing = check_completeness(doc).missing()
    assert "C08" in missing and "C14" in missing
    points = {e.code: e.points for e in compute_score(doc, ExternalSignals()).breakdown}
    # C08 and C14 never double-bill: they are priced by TRANSFER/ADM_OPAQUE
    assert points["MISSING"] == -12
    assert points["TRANSFER"] == -10
    assert points["ADM_OPAQUE"] == -10


def test_tosdr_grades(clean_doc):
    for grade, points in (("A", 5), ("B", 0), ("C", -3), ("D", -6), ("E", -10)):
        report = compute_score(clean_doc, ExternalSignals(tosdr_grade=grade))
        table = {e.code: e.points for e in report.breakdown}
        assert table.get("TOSDR", 0) == points
    bonus = compute_score(clean_doc, ExternalSignals(tosdr_grade="A"))
    assert bonus.raw_score == 105
    assert bonus.score == 100


def test_privacy_spy_penalty(clean_doc):
    for value, points in ((10.0, 0), (7.5, -3), (0.0, -10)):
        report = compute_score(clean_doc, ExternalSignals(privacy_spy_score=value))
        table = {e.code: e.points for e in report.breakdown}
        assert table.get("PSPY", 0) == points


def test_score_clamped_and_label_thresholds(minimal_doc):
    crushing = ExternalSignals(tracker_count=50, phishing_flagged=True, tosdr_grade="E")
    report = compute_score(minimal_doc, crushing)
    assert report.raw_score < 0
    assert report.score == 0
    assert report.label == RED
    assert compute_score(minimal_doc, ExternalSignals()).label == GREEN


def test_raw_score_identity(minimal_doc, complete_doc):
    rng = random.Random(3)
    for _ in range(50):
        doc = docgen.generate_document(rng)
        signals = ExternalSignals(
            tracker_count=rng.randrange(0, 20),
            phishing_flagged=rng.random() < 0.2,
            tosdr_grade=rng.choice((None, "A", "B", "C", "D", "E")),
            privacy_spy_score=rng.choice((None, rng.uniform(0, 10))),
        )
        report = compute_score(doc, signals)
        assert report.raw_score == 100 + sum(e.points for e in report.breakdown)
        assert report.score == max(0, min(100, report.raw_score))
        assert report.label == {True: GREEN, False: YELLOW}[report.score >= 70] if report.score >= 40 else RED


def test_summary_card(complete_doc, minimal_doc):
    card = summarize(complete_doc, ExternalSignals(tracker_count=7))
    assert card.controller_name == "Complete Corp"
    assert card.transfer_count == 1
    assert card.adm_in_use is True
    assert card.tracker_count == 7
    assert card.missing_disclosures == 0
    bare = summarize(minimal_doc, ExternalSignals())
    assert bare.transfer_count == 0
    assert bare.adm_in_use is False
    assert bare.missing_disclosures == 6


def test_wire_trees(minimal_doc):
    report = compute_score(minimal_doc, ExternalSignals(tracker_count=2))
    tree = report_to_tree(report)
    assert set(tree) == {"score", "label", "breakdown", "rawScore"}
    assert tree["breakdown"] == [
        {"code": "TRACKERS", "points": -8},
        {"code": "MISSING", "points": -12},
    ]
    card = card_to_tree(summarize(minimal_doc, ExternalSignals()))
    assert set(card) == {
        "controllerName",
        "transferCount",
        "admInUse",
        "trackerCount",
        "missingDisclosures",
    }


def test_signals_from_tree():
    signals = signals_from_tree(
        {"trackerCount": 3, "phishingFlagged": True, "tosdrGrade": "C", "privacySpyScore": 4.5}
    )
    assert signals == ExternalSignals(3, True, "C", 4.5)
    assert signals_from_tree({}) == ExternalSignals()
    for bad in (
        {"trackerCount": -1},
        {"trackerCount": True},
        {"phishingFlagged": "yes"},
        {"tosdrGrade": "F"},
        {"privacySpyScore": 11},
        {"frobnicate": 1},
        [],
    ):
        with pytest.raises(ValidationError):
            signals_from_tree(bad)


def _worsen(rng, doc, signals):
    """One strictly-not-better variant of the inputs."""
    kind = rng.randrange(3)
    if kind == 0:
        return doc, replace(signals, tracker_count=signals.tracker_count + rng.randint(1, 6))
    if kind == 1:
        return doc, replace(signals, phishing_flagged=True)
    bare = model.ThirdCountryTransfer(country="US", adequacy_decision=False)
    return replace(doc, third_country_transfers=doc.third_country_transfers + (bare,)), signals


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_worse_inputs_never_raise_score(seed):
    rng = random.Random(seed)
    doc = docgen.generate_document(rng)
    signals = ExternalSignals(
        tracker_count=rng.randrange(0, 15),
        phishing_flagged=rng.random() < 0.3,
        tosdr_grade=rng.choice((None, "A", "C", "E")),
        privacy_spy_score=rng.choice((None, rng.uniform(0, 10))),
    )
    before = compute_score(doc, signals).score
    worse_doc, worse_signals = _worsen(rng, doc, signals)
    after = compute_score(worse_doc, worse_signals).score
    assert after <= before
