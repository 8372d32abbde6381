"""Acceptance gate: every shipped guarantee checked end to end.

Each test prints one verdict line, so a verbose run doubles as the
release checklist. The checks here lean on independent oracles
(``docgen``, ``oracle_filters``, the template files themselves) rather
than on the code paths they judge.
"""

from __future__ import annotations

import contextlib
import copy
import json
import random
import subprocess
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

import docgen
import oracle_filters
from fastapi.testclient import TestClient
from tilt_toolkit import archive, dsar, scoring
from tilt_toolkit.core import check_completeness, codec, diffing, model
from tilt_toolkit.hub import (
    INTENT_KINDS,
    DocumentStore,
    HubConfig,
    Intent,
    answer_question,
    create_app,
    scan_documents,
)

FIXTURES = Path(__file__).parent / "fixtures"
IDENTITY = {"EMAIL": "ada@example.net", "FULL_NAME": "Ada Lovelace"}
SENTINEL = "SENTINEL-9731-XYZZY"


@contextlib.contextmanager
def _verdict(label: str):
    try:
        yield
    except BaseException:
        print(f"{label}: FAIL")
        raise
    print(f"{label}: PASS")


def _shuffled(node, rng: random.Random):
    if isinstance(node, dict):
        keys = list(node)
        rng.shuffle(keys)
        return {key: _shuffled(node[key], rng) for key in keys}
    if isinstance(node, list):
        return [_shuffled(item, rng) for item in node]
    return node


def test_criterion_1_round_trip_and_hash_invariance():
    with _verdict("criterion 1 codec round-trip and hash invariance"):
        rng = random.Random(4201)
        for _ in range(200):
            doc = docgen.generate_document(rng)
            assert codec.parse(codec.canonicalize(doc)) == doc
            reference = codec.compute_hash(doc)
            tree = codec.document_to_tree(doc)
            scrambled = json.dumps(_shuffled(tree, rng), indent=rng.randrange(1, 5))
            assert codec.compute_hash(codec.parse(scrambled)) == reference


def test_criterion_2_completeness_oracle(minimal_doc, complete_doc):
    with _verdict("criterion 2 completeness against hand-derived sets"):
        report = check_completeness(minimal_doc)
        assert report.missing() == ("C04", "C05", "C07", "C09", "C10", "C12")
        assert check_completeness(complete_doc).missing() == ()


def test_criterion_3_diff_laws():
    with _verdict("criterion 3 diff identity and patch laws"):
        rng = random.Random(4203)
        for _ in range(200):
            old, new = docgen.generate_pair(rng)
            assert diffing.diff(old, old).entries == ()
            assert diffing.apply_diff(old, diffing.diff(old, new)) == new


def test_criterion_4_query_matches_brute_force(tmp_path):
    with _verdict("criterion 4 store queries equal the brute-force oracle"):
        rng = random.Random(4204)
        store = DocumentStore(tmp_path / "store")
        trees = {}
        for index in range(50):
            doc = docgen.generate_document(rng, doc_id=f"doc-{index:02d}")
            store.put(doc)
            trees[doc.meta.id] = codec.document_to_tree(store.fetch(doc.meta.id).doc)
        corpus = list(trees.values())
        for _ in range(100):
            text = docgen.generate_filter(rng, corpus)
            got = sorted(match["id"] for match in scan_documents(store, text))
            expected = sorted(
                doc_id
                for doc_id, tree in trees.items()
                if oracle_filters.oracle_matches(text, tree)
            )
            assert got == expected, text


_CHILD = """\
import dataclasses
import random
import sys
from pathlib import Path

sys.path.insert(0, sys.argv[3])
import docgen
from tilt_toolkit.hub import DocumentStore

rng = random.Random(int(sys.argv[2]))
store = DocumentStore(Path(sys.argv[1]))
versions = {}
for index in range(60):
    doc_id = "doc-%d" % (index % 5)
    version = versions.get(doc_id, 0) + 1
    versions[doc_id] = version
    doc = docgen.generate_document(rng, doc_id=doc_id)
    doc = dataclasses.replace(doc, meta=dataclasses.replace(doc.meta, version=version))
    print("ack %s %d %s" % (doc_id, version, store.put(doc)), flush=True)
"""


def test_criterion_5_acknowledged_puts_survive_kill(tmp_path):
    with _verdict("criterion 5 acknowledged puts survive process kill"):
        script = tmp_path / "put_until_killed.py"
        script.write_text(_CHILD, encoding="utf-8")
        rng = random.Random(4205)
        for trial in range(20):
            data_dir = tmp_path / f"trial-{trial}"
            proc = subprocess.Popen(
                [sys.executable, str(script), str(data_dir), str(trial), str(Path(__file__).parent)],
                stdout=subprocess.PIPE,
                text=True,
            )
            acked = []
            for _ in range(rng.randrange(1, 30)):
                line = proc.stdout.readline()
                if not line:
                    break
                acked.append(line.split())
            proc.kill()
            proc.wait()
            proc.stdout.close()
            assert acked
            store = DocumentStore(data_dir)
            for _, doc_id, version, etag in acked:
                assert store.fetch(doc_id, int(version)).etag == etag


def test_criterion_6_scoring_examples_and_monotonicity(complete_doc):
    with _verdict("criterion 6 scoring worked examples and monotonicity"):
        clean = replace(complete_doc, third_country_transfers=(), automated_decision_making=None)
        report = scoring.compute_score(clean, scoring.ExternalSignals())
        assert (report.score, report.label, report.breakdown) == (100, scoring.GREEN, ())

        report = scoring.compute_score(clean, scoring.ExternalSignals(phishing_flagged=True))
        assert [(e.code, e.points) for e in report.breakdown] == [("PHISH", -50)]
        assert (report.score, report.label) == (50, scoring.YELLOW)

        bare = model.ThirdCountryTransfer(country="US", adequacy_decision=False)
        transferred = replace(clean, third_country_transfers=(bare,))
        report = scoring.compute_score(
            transferred, scoring.ExternalSignals(tracker_count=12, tosdr_grade="E")
        )
        assert [(e.code, e.points) for e in report.breakdown] == [
            ("TRACKERS", -40),
            ("TRANSFER", -10),
            ("TOSDR", -10),
        ]
        assert (report.score, report.label) == (40, scoring.YELLOW)

        rng = random.Random(4206)
        extra = model.ThirdCountryTransfer(country="BR", adequacy_decision=False)
        for _ in range(500):
            doc = docgen.generate_document(rng)
            signals = scoring.ExternalSignals(
                tracker_count=rng.randrange(0, 25),
                phishing_flagged=rng.random() < 0.2,
                tosdr_grade=rng.choice((None, "A", "B", "C", "D", "E")),
                privacy_spy_score=None if rng.random() < 0.5 else round(rng.uniform(0, 10), 1),
            )
            report = scoring.compute_score(doc, signals)
            assert report.raw_score == 100 + sum(e.points for e in report.breakdown)
            move = rng.randrange(3)
            if move == 0:
                worse_doc = doc
                worse_signals = replace(
                    signals, tracker_count=signals.tracker_count + rng.randrange(1, 8)
                )
            elif move == 1:
                worse_doc = doc
                worse_signals = replace(signals, phishing_flagged=True)
            else:
                worse_doc = replace(
                    doc, third_country_transfers=doc.third_country_transfers + (extra,)
                )
                worse_signals = signals
            assert scoring.compute_score(worse_doc, worse_signals).score <= report.score


def test_criterion_7_dsar_walkthroughs(tmp_path):
    with _verdict("criterion 7 access-request runs, resume, and privacy"):
        descriptor = dsar.validate_descriptor(
            (FIXTURES / "example.dara.json").read_text(encoding="utf-8")
        )
        fixture = json.loads((FIXTURES / "mock_site.json").read_text(encoding="utf-8"))
        driver = dsar.MockDriver(copy.deepcopy(fixture))
        session = dsar.execute(
            descriptor, driver, IDENTITY, str(tmp_path / "a"), clock=dsar.VirtualClock()
        )
        assert session.status == dsar.STATUS_DONE
        assert len(session.artifacts) == 1
        filled = [call.args[1] for call in driver.calls if call.method == "fill"]
        assert IDENTITY["EMAIL"] in filled
        assert IDENTITY["FULL_NAME"] in filled
        for call in driver.calls:
            blob = " ".join(call.args)
            if IDENTITY["EMAIL"] in blob or IDENTITY["FULL_NAME"] in blob:
                assert call.method == "fill"

        tree = json.loads((FIXTURES / "example.dara.json").read_text(encoding="utf-8"))
        tree["steps"][6]["maxAttempts"] = 1
        impatient = dsar.validate_descriptor(json.dumps(tree))
        assert isinstance(impatient.steps[6], dsar.Poll)
        session = dsar.execute(
            impatient,
            dsar.MockDriver(copy.deepcopy(fixture)),
            IDENTITY,
            str(tmp_path / "b"),
            clock=dsar.VirtualClock(),
        )
        assert session.status == dsar.STATUS_FAILED
        assert session.failure is not None
        assert session.failure.step_index == 6

        parked_descriptor = dsar.validate_descriptor(
            (FIXTURES / "resume.dara.json").read_text(encoding="utf-8")
        )
        slow = json.loads((FIXTURES / "mock_site_slow.json").read_text(encoding="utf-8"))
        ready = json.loads((FIXTURES / "mock_site_ready.json").read_text(encoding="utf-8"))
        parked = dsar.execute(
            parked_descriptor,
            dsar.MockDriver(slow),
            IDENTITY,
            str(tmp_path / "c"),
            clock=dsar.VirtualClock(),
        )
        assert parked.status == dsar.STATUS_WAITING
        fresh = dsar.MockDriver(ready)
        resumed = dsar.execute(
            parked_descriptor,
            fresh,
            IDENTITY,
            str(tmp_path / "c"),
            resume=parked,
            clock=dsar.VirtualClock(),
        )
        assert resumed.status == dsar.STATUS_DONE
        assert [call.method for call in fresh.calls] == ["exists", "fetch_download"]


def test_criterion_8_archive_conservation_risk_and_privacy():
    with _verdict("criterion 8 archive conservation, risk factor, privacy"):
        man = archive.ingest(FIXTURES / "reddit_export", service="reddit")
        prof = archive.profile(man)
        for kind in archive.KINDS:
            from_manifest = sum(
                entry.record_count for entry in man.files if entry.kind == kind
            )
            assert prof.counts_by_kind[kind] == from_manifest
        assert sum(prof.counts_by_kind.values()) == sum(
            entry.record_count for entry in man.files
        )

        empty = replace(prof, counts_by_kind={kind: 0 for kind in archive.KINDS})
        assert archive.risk_factor(empty) == 0
        lone = replace(
            prof,
            counts_by_kind={kind: (1 if kind == "messages" else 0) for kind in archive.KINDS},
        )
        assert archive.risk_factor(lone) == 6

        rng = random.Random(4208)
        counts = dict(prof.counts_by_kind)
        risk = archive.risk_factor(prof)
        for _ in range(200):
            counts[rng.choice(archive.KINDS)] += rng.randrange(1, 6)
            bumped = archive.risk_factor(replace(prof, counts_by_kind=dict(counts)))
            assert bumped >= risk
            risk = bumped

        entry = archive.scoreboard_entry(prof)
        assert SENTINEL not in json.dumps(archive.entry_to_tree(entry))


def _resolve(tree, path: str):
    node = tree
    for seg in path.split("/"):
        node = node[int(seg)] if isinstance(node, list) else node[seg]
    return node


def _intents_for(doc):
    for kind in INTENT_KINDS:
        if kind in ("PURPOSES_FOR_CATEGORY", "RETENTION_FOR_CATEGORY"):
            for entry in doc.data_disclosed:
                yield Intent(kind, (("category", entry.category),))
        else:
            yield Intent(kind)


def _rebuilt_slots(tree, paths):
    """Interpolation values recomputed from the evidence paths alone."""
    slots = {}
    countries = []
    purposes = []
    rights = []
    for path in paths:
        segments = path.split("/")
        value = _resolve(tree, path)
        if path in ("controller/name", "controller/address", "controller/country"):
            slots[segments[-1]] = value
        elif segments[0] == "thirdCountryTransfers" and segments[-1] == "country":
            countries.append(value)
        elif segments[0] == "dataDisclosed" and segments[-1] == "category":
            slots["category"] = value
        elif segments[0] == "dataDisclosed" and segments[-1] == "description":
            purposes.append(value)
        elif "storage" in segments and segments[-1] == "value":
            slots["value"] = value
        elif path == "automatedDecisionMaking/logicDescription":
            slots["logic"] = value
        elif segments[0] == "rights" and segments[-1] == "available":
            rights.append(segments[1])
    if countries:
        slots["countries"] = ", ".join(countries)
        slots["count"] = len(countries)
    if purposes:
        slots["purposes"] = "; ".join(purposes)
    if rights:
        slots["rights"] = ", ".join(rights)
    return slots


def test_criterion_9_answers_deterministic_and_grounded(minimal_doc, complete_doc):
    with _verdict("criterion 9 answers deterministic and evidence-grounded"):
        templates = json.loads(
            (resources.files("tilt_toolkit.hub") / "data" / "qa_templates.json").read_text(
                encoding="utf-8"
            )
        )
        rng = random.Random(4209)
        docs = [minimal_doc, complete_doc]
        docs += [docgen.generate_document(rng) for _ in range(20)]
        for doc in docs:
            tree = codec.document_to_tree(doc)
            for intent in _intents_for(doc):
                answer = answer_question(doc, intent)
                assert answer == answer_question(doc, intent)
                slots = _rebuilt_slots(tree, answer.evidence_paths)
                table = templates[intent.kind]
                language = doc.meta.language if doc.meta.language in table else "en"
                candidates = set()
                for template in table[language].values():
                    try:
                        candidates.add(template.format(**slots))
                    except (KeyError, IndexError):
                        continue
                assert answer.answer_text in candidates


def test_criterion_10_ui_walkthrough_and_bundle(tmp_path):
    with _verdict("criterion 10 annotate-to-export walkthrough and UI bundle"):
        dist = Path(__file__).parent.parent / "frontend" / "dist"
        assert (dist / "index.html").is_file()
        assert (dist / "assets" / "main.js").is_file()

        body = (
            "The data controller is Example GmbH,\n"
            "Example Str. 1, 10115 Berlin, Germany.\n"
            "We process contact data for account management.\n"
            "You have the right to access, rectification, erasure, restriction, "
            "portability and objection.\n"
            "You may withdraw your consent at any time."
        )
        block = "Example GmbH,\nExample Str. 1, 10115 Berlin, Germany."
        block_start = body.index(block)

        app = create_app(HubConfig(data_dir=str(tmp_path / "hub"), ui_dir=str(dist)))
        with TestClient(app) as web:
            page = web.get("/ui/")
            assert page.status_code == 200
            assert "tilt annotator" in page.text
            assert web.get("/ui/assets/main.js").status_code == 200

            assert web.post("/policies", json={"id": "p", "body": body}).status_code == 201
            assert web.post("/tasks", json={"policyId": "p", "id": "t"}).status_code == 201
            while True:
                question = web.get("/tasks/t/next").json()
                if question["done"]:
                    break
                field = question["field"]
                found = web.get("/tasks/t/suggestions", params={"field": field}).json()
                if field == "controllerIdentity":
                    spans = [[block_start, block_start + len(block)]]
                elif found:
                    spans = [[found[0]["spanStart"], found[0]["spanEnd"]]]
                else:
                    spans = []
                posted = web.post(
                    "/tasks/t/submissions",
                    json={"field": field, "present": bool(spans), "spans": spans},
                )
                assert posted.status_code == 200
            tree = web.get("/tasks/t/export", params={"docId": "doc-ui"}).json()

        document = codec.document_from_tree(tree)
        assert document.meta.id == "doc-ui"
        assert document.controller.name == "Example GmbH"
        report = check_completeness(document)
        assert report.item("C01").status == "present"
