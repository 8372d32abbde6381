"""Annotate-to-export walkthrough issuing exactly the browser client's calls."""

from __future__ import annotations

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from tilt_toolkit.core import check_completeness, codec
from tilt_toolkit.hub import HubConfig, create_app

FRONTEND_DIST = Path(__file__).resolve().parent.parent / "frontend" / "dist"

POLICY_BODY = (
    "The data controller is Example GmbH,\nExample Str. 1, 10115 Berlin, Germany.\n"
    "We process contact data for account management.\n"
    "You have the right to access, rectification, erasure, restriction, "
    "portability and objection.\n"
    "You may withdraw your consent at any time."
)


@pytest.fixture()
def client(tmp_path):
    app = create_app(HubConfig(data_dir=str(tmp_path / "data")))
    with TestClient(app) as bound:
        yield bound


def test_annotate_to_export_walkthrough(client):
    created = client.post("/policies", json={"id": "policy-1", "body": POLICY_BODY})
    assert created.status_code == 201
    task = client.post("/tasks", json={"policyId": "policy-1", "id": "task-1"})
    assert task.status_code == 201

    loaded = client.get("/tasks/task-1")
    assert loaded.status_code == 200
    assert loaded.json() == task.json()
    policy = client.get("/policies/policy-1")
    assert policy.status_code == 200
    body = policy.json()["body"]
    assert body == POLICY_BODY

    controller_block = "Example GmbH,\nExample Str. 1, 10115 Berlin, Germany."
    block_start = body.index(controller_block)
    block_end = block_start + len(controller_block)

    taken: dict[str, str] = {}
    for _ in range(50):
        question = client.get("/tasks/task-1/next").json()
        if question["done"]:
            break
        field = question["field"]
        suggestions = client.get(
            "/tasks/task-1/suggestions", params={"field": field}
        ).json()
        if field == "controllerIdentity":
            span = [block_start, block_end]
        elif suggestions:
            span = [suggestions[0]["spanStart"], suggestions[0]["spanEnd"]]
        else:
            span = None
        if span is not None:
            taken[field] = body[span[0] : span[1]]
            payload = {
                "field": field,
                "present": True,
                "spans": [span],
                "annotator": "walkthrough",
            }
        else:
            payload = {
                "field": field,
                "present": False,
                "spans": [],
                "annotator": "walkthrough",
            }
        advanced = client.post("/tasks/task-1/submissions", json=payload)
        assert advanced.status_code == 200
        assert advanced.json()["cursor"] == question["cursor"] + 1
    else:
        pytest.fail("task never reached the done state")

    assert taken["controllerIdentity"] == controller_block

    exported = client.get(
        "/tasks/task-1/export",
        params={"docId": "doc-walkthrough", "language": "en", "country": "DE"},
    )
    assert exported.status_code == 200
    tree = exported.json()

    document = codec.document_from_tree(tree)
    assert document.meta.id == "doc-walkthrough"
    assert document.controller.name == "Example GmbH"
    assert document.controller.address == "Example Str. 1, 10115 Berlin, Germany."

    report = check_completeness(document)
    assert report.item("C01").status == "present"


def test_hub_serves_built_frontend(tmp_path):
    if not (FRONTEND_DIST / "index.html").is_file():
        pytest.skip("frontend bundle not built")
    app = create_app(HubConfig(data_dir=str(tmp_path / "data"), ui_dir=str(FRONTEND_DIST)))
    with TestClient(app) as client:
        page = client.get("/ui/")
        assert page.status_code == 200
        assert "tilt annotator" in page.text
        assert '<main id="app">' in page.text

        script = client.get("/ui/assets/main.js")
        assert script.status_code == 200
        assert "loadTask" in script.text

        style = client.get("/ui/style.css")
        assert style.status_code == 200
