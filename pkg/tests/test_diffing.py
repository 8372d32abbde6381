"""Structural diff and patch laws."""

from __future__ import annotations

import random
from dataclasses import replace
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings, strategies as st

import docgen
from tilt_toolkit.core import codec, diffing, model
from tilt_toolkit.errors import ConflictError, PathError, ValidationError


def _retree(doc, mutate):
    tree = codec.document_to_tree(doc)
    mutate(tree)
    return codec.document_from_tree(tree)


def test_diff_of_identical_documents_is_empty(complete_doc):
    assert diffing.diff(complete_doc, complete_doc).entries == ()


def test_changed_scalar(minimal_doc):
    new = _retree(minimal_doc, lambda t: t["controller"].update(country="FR"))
    delta = diffing.diff(minimal_doc, new)
    assert [(e.path, e.op, e.before, e.after) for e in delta.entries] == [
        ("controller/country", "changed", "DE", "FR")
    ]


def test_added_and_removed_fields(minimal_doc):
    new = _retree(
        minimal_doc,
        lambda t: t.update(dpo={"name": "Dr. D", "email": "dpo@example.net"}),
    )
    delta = diffing.diff(minimal_doc, new)
    assert [(e.path, e.op) for e in delta.entries] == [("dpo", "added")]
    back = diffing.diff(new, minimal_doc)
    assert [(e.path, e.op) for e in back.entries] == [("dpo", "removed")]
    assert back.entries[0].before == {"name": "Dr. D", "email": "dpo@example.net"}


def test_array_tail_entries(complete_doc):
    def drop_last(tree):
        tree["dataDisclosed"].pop()

    shorter = _retree(complete_doc, drop_last)
    delta = diffing.diff(complete_doc, shorter)
    assert [(e.path, e.op) for e in delta.entries] == [("dataDisclosed/1", "removed")]
    delta = diffing.diff(shorter, complete_doc)
    assert [(e.path, e.op) for e in delta.entries] == [("dataDisclosed/1", "added")]


def test_shared_array_positions_recurse(complete_doc):
    def rename(tree):
        tree["dataDisclosed"][0]["category"] = "renamed category"

    new = _retree(complete_doc, rename)
    delta = diffing.diff(complete_doc, new)
    assert [e.path for e in delta.entries] == ["dataDisclosed/0/category"]


def test_hash_and_modified_never_appear(minimal_doc):
    hashed = codec.with_hash(minimal_doc)
    bumped = replace(
        minimal_doc,
        meta=replace(
            minimal_doc.meta,
            modified=datetime(2030, 1, 1, tzinfo=timezone.utc),
        ),
    )
    assert diffing.diff(minimal_doc, hashed).entries == ()
    assert diffing.diff(minimal_doc, bumped).entries == ()


def test_apply_keeps_base_modified_and_blank_hash(minimal_doc):
    new = _retree(minimal_doc, lambda t: t["controller"].update(name="Other GmbH"))
    patched = diffing.apply_diff(codec.with_hash(minimal_doc), diffing.diff(minimal_doc, new))
    assert patched.controller.name == "Other GmbH"
    assert patched.meta.modified == minimal_doc.meta.modified
    assert patched.meta.hash == ""


def test_apply_rejects_stale_before(minimal_doc):
    new = _retree(minimal_doc, lambda t: t["controller"].update(country="FR"))
    delta = diffing.diff(minimal_doc, new)
    already_moved = _retree(minimal_doc, lambda t: t["controller"].update(country="SE"))
    with pytest.raises(ConflictError):
        diffing.apply_diff(already_moved, delta)


def test_apply_rejects_unresolvable_path(minimal_doc):
    delta = diffing.DocumentDiff(
        entries=(diffing.DiffEntry("dpo/email", "changed", before="a@b.c", after="x@y.z"),)
    )
    with pytest.raises(PathError):
        diffing.apply_diff(minimal_doc, delta)


def test_apply_rejects_adding_present_path(minimal_doc):
    delta = diffing.DocumentDiff(
        entries=(diffing.DiffEntry("controller/name", "added", after="Dup GmbH"),)
    )
    with pytest.raises(ConflictError):
        diffing.apply_diff(minimal_doc, delta)


def test_diff_tree_round_trip(complete_doc, minimal_doc):
    rng = random.Random(5)
    old, new = docgen.generate_pair(rng)
    delta = diffing.diff(old, new)
    tree = diffing.diff_to_tree(delta)
    assert set(tree) == {"entries"}
    assert diffing.diff_from_tree(tree) == delta


def test_diff_from_tree_rejects_bad_shapes():
    with pytest.raises(ValidationError):
        diffing.diff_from_tree([])
    with pytest.raises(ValidationError):
        diffing.diff_from_tree({"entries": [{"path": "x", "op": "renamed"}]})
    with pytest.raises(ValidationError):
        diffing.diff_from_tree({"entries": [{"path": "x", "op": "added"}]})
    with pytest.raises(ValidationError):
        diffing.diff_from_tree(
            {"entries": [{"path": "x", "op": "added", "after": 1, "before": 0}]}
        )


def test_entries_are_sorted_by_path(complete_doc, minimal_doc):
    rng = random.Random(17)
    for _ in range(20):
        old, new = docgen.generate_pair(rng)
        paths = [entry.path for entry in diffing.diff(old, new).entries]
        assert paths == sorted(paths)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_apply_diff_round_trips(seed):
    old, new = docgen.generate_pair(random.Random(seed))
    assert diffing.apply_diff(old, diffing.diff(old, new)) == new
