"""REST surface of the hub: documents, filters, Q&A, and annotation.

Endpoints are synchronous handlers (FastAPI runs them in a worker
thread pool), so reads stay responsive while a write fsyncs. Store
locks serialize writes per document id and per task id. Every toolkit
error maps to one JSON shape: ``{"error": name, "detail": text}``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import annotation
from ..core import check_completeness, codec, diffing
from ..core.completeness import report_to_tree
from ..errors import (
    ConflictError,
    IoError,
    NotFoundError,
    TaskNotDoneError,
    ToolkitError,
    UnknownCategoryError,
    ValidationError,
    VersionConflictError,
)
from . import qa
from .filters import FilterExpr, evaluate, parse_filter
from .store import DocumentStore, JsonStore

__all__ = ["DEFAULT_DATA_DIR", "DEFAULT_PORT", "HubConfig", "create_app", "resolve_config", "serve"]

DEFAULT_PORT = 8000
DEFAULT_DATA_DIR = "hub-data"

ENV_PORT = "TILT_HUB_PORT"
ENV_DATA_DIR = "TILT_HUB_DATA_DIR"


@dataclass(frozen=True)
class HubConfig:
    port: int = DEFAULT_PORT
    data_dir: str = DEFAULT_DATA_DIR
    ui_dir: str | None = None


def resolve_config(
    port: int | None = None, data_dir: str | None = None, ui_dir: str | None = None
) -> HubConfig:
    """Explicit flag beats environment beats default."""
    if port is None:
        env = os.environ.get(ENV_PORT, "")
        port = int(env) if env else DEFAULT_PORT
    if data_dir is None:
        data_dir = os.environ.get(ENV_DATA_DIR, "") or DEFAULT_DATA_DIR
    return HubConfig(port=port, data_dir=data_dir, ui_dir=ui_dir)


def _status_for(exc: ToolkitError) -> int:
    if isinstance(exc, (NotFoundError, UnknownCategoryError)):
        return 404
    if isinstance(exc, (VersionConflictError, ConflictError, TaskNotDoneError)):
        return 409
    if isinstance(exc, IoError):
        return 500
    return 400


def _matched_paths(expr: FilterExpr) -> list[str]:
    paths: list[str] = []
    for conjunct in expr.conjuncts:
        if conjunct.path not in paths:
            paths.append(conjunct.path)
    return paths


def scan_documents(store: DocumentStore, filter_text: str) -> list[dict]:
    """Latest version of every stored document matching the filter.

    Shared by the query endpoint and the command line, so both answer
    identically. Ids come back in sorted order.
    """
    expr = parse_filter(filter_text)
    matched = _matched_paths(expr)
    results = []
    for doc_id in store.ids():
        version = store.latest_version(doc_id)
        if version is None:
            continue
        record = store.fetch(doc_id, version)
        if evaluate(expr, codec.document_to_tree(record.doc)):
            results.append({"id": doc_id, "version": version, "matchedPaths": matched})
    return results


def _spans_from(payload: Any) -> tuple[tuple[int, int], ...]:
    if not isinstance(payload, list):
        raise ValidationError("must be an array of [start, end) pairs", "spans")
    spans = []
    for i, item in enumerate(payload):
        ok = (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        )
        if not ok:
            raise ValidationError("must be a [start, end) pair of integers", f"spans/{i}")
        spans.append((item[0], item[1]))
    return tuple(spans)


def create_app(config: HubConfig) -> FastAPI:
    app = FastAPI(title="tilt-hub")
    root = Path(config.data_dir)
    documents = DocumentStore(root)
    policies = JsonStore(root / "policies")
    tasks = JsonStore(root / "tasks")

    @app.exception_handler(ToolkitError)
    def _toolkit_error(request: Request, exc: ToolkitError) -> JSONResponse:
        return JSONResponse(
            {"error": exc.name, "detail": str(exc)}, status_code=_status_for(exc)
        )

    @app.exception_handler(RequestValidationError)
    def _request_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse({"error": "ValidationError", "detail": str(exc)}, status_code=400)

    # --- documents --------------------------------------------------------

    @app.put("/documents/{doc_id}", status_code=201)
    def put_document(doc_id: str, response: Response, payload: Any = Body(...)) -> dict:
        doc = codec.document_from_tree(payload)
        if doc.meta.id != doc_id:
            raise ValidationError("must equal the id in the request path", "meta/id")
        etag = documents.put(doc)
        response.headers["ETag"] = etag
        return {"id": doc.meta.id, "version": doc.meta.version, "etag": etag}

    @app.get("/documents")
    def query_documents(filter: str | None = Query(default=None)) -> list[dict]:
        return scan_documents(documents, filter or "")

    @app.get("/documents/{doc_id}")
    def get_document(
        doc_id: str, response: Response, version: int | None = Query(default=None)
    ) -> dict:
        record = documents.fetch(doc_id, version)
        response.headers["ETag"] = record.etag
        return codec.document_to_tree(record.doc)

    @app.get("/documents/{doc_id}/completeness")
    def get_completeness(doc_id: str) -> dict:
        record = documents.fetch(doc_id)
        return report_to_tree(check_completeness(record.doc))

    @app.get("/documents/{doc_id}/diff")
    def get_diff(
        doc_id: str,
        from_version: int = Query(alias="from"),
        to_version: int = Query(alias="to"),
    ) -> dict:
        old = documents.fetch(doc_id, from_version)
        new = documents.fetch(doc_id, to_version)
        return diffing.diff_to_tree(diffing.diff(old.doc, new.doc))

    @app.post("/documents/{doc_id}/answers")
    def post_answer(doc_id: str, payload: Any = Body(...)) -> dict:
        intent = qa.intent_from_tree(payload)
        record = documents.fetch(doc_id)
        answer = qa.answer_question(record.doc, intent)
        return {"id": doc_id, "kind": intent.kind, **answer.to_tree()}

    # --- policies and annotation tasks -------------------------------------

    @app.post("/policies", status_code=201)
    def post_policy(payload: Any = Body(...)) -> dict:
        policy = annotation.policy_from_tree(payload)
        if policies.exists(policy.id):
            raise ConflictError("policy id already exists", policy.id)
        policies.put(policy.id, annotation.policy_to_tree(policy))
        return annotation.policy_to_tree(policy)

    def _load_policy(policy_id: str) -> annotation.PolicyText:
        return annotation.policy_from_tree(policies.get(policy_id))

    def _load_task(task_id: str) -> annotation.AnnotationTask:
        return annotation.task_from_tree(tasks.get(task_id))

    def _task_summary(task: annotation.AnnotationTask) -> dict:
        return {
            "id": task.id,
            "policyId": task.policy_id,
            "cursor": task.cursor,
            "total": len(task.question_queue),
            "status": task.status,
        }

    @app.get("/policies/{policy_id}")
    def get_policy(policy_id: str) -> dict:
        return annotation.policy_to_tree(_load_policy(policy_id))

    @app.post("/tasks", status_code=201)
    def post_task(payload: Any = Body(...)) -> dict:
        if not isinstance(payload, dict):
            raise ValidationError("must be an object", "")
        for key in payload:
            if key not in {"policyId", "id"}:
                raise ValidationError("unknown field", key)
        policy_id = payload.get("policyId")
        if not isinstance(policy_id, str) or not policy_id:
            raise ValidationError("must be non-empty text", "policyId")
        task_id = payload.get("id")
        if task_id is not None and (not isinstance(task_id, str) or not task_id):
            raise ValidationError("must be non-empty text", "id")
        policy = _load_policy(policy_id)
        task = annotation.create_task(policy, task_id=task_id)
        if tasks.exists(task.id):
            raise ConflictError("task id already exists", task.id)
        tasks.put(task.id, annotation.task_to_tree(task))
        return _task_summary(task)

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str) -> dict:
        return _task_summary(_load_task(task_id))

    @app.get("/tasks/{task_id}/next")
    def get_next(task_id: str) -> dict:
        task = _load_task(task_id)
        question = annotation.next_question(task)
        base = {"cursor": task.cursor, "total": len(task.question_queue)}
        if question is None:
            return {"done": True, **base}
        return {"done": False, "field": question.field, "prompt": question.prompt, **base}

    @app.post("/tasks/{task_id}/submissions")
    def post_submission(task_id: str, payload: Any = Body(...)) -> dict:
        if not isinstance(payload, dict):
            raise ValidationError("must be an object", "")
        for key in payload:
            if key not in {"field", "present", "spans", "annotator"}:
                raise ValidationError("unknown field", key)
        field = payload.get("field")
        if not isinstance(field, str):
            raise ValidationError("must be text", "field")
        present = payload.get("present")
        if not isinstance(present, bool):
            raise ValidationError("must be a boolean", "present")
        spans = _spans_from(payload.get("spans", []))
        annotator = payload.get("annotator", "anonymous")
        if not isinstance(annotator, str):
            raise ValidationError("must be text", "annotator")
        with tasks.lock(task_id):
            task = _load_task(task_id)
            policy = _load_policy(task.policy_id)
            task = annotation.submit(task, policy, field, present, spans, annotator=annotator)
            tasks.put(task.id, annotation.task_to_tree(task))
        return {
            "id": task.id,
            "cursor": task.cursor,
            "total": len(task.question_queue),
            "status": task.status,
            "progress": task.progress(),
        }

    @app.get("/tasks/{task_id}/suggestions")
    def get_suggestions(task_id: str, field: str = Query()) -> list[dict]:
        task = _load_task(task_id)
        policy = _load_policy(task.policy_id)
        return [
            {
                "field": item.field,
                "spanStart": item.span_start,
                "spanEnd": item.span_end,
                "confidence": item.confidence,
                "method": item.method,
            }
            for item in annotation.suggest(task, policy, field)
        ]

    @app.get("/tasks/{task_id}/export")
    def get_export(
        task_id: str,
        doc_id: str | None = Query(default=None, alias="docId"),
        doc_name: str | None = Query(default=None, alias="docName"),
        language: str | None = Query(default=None),
        country: str | None = Query(default=None),
    ) -> dict:
        task = _load_task(task_id)
        policy = _load_policy(task.policy_id)
        overrides = {
            "docId": doc_id,
            "docName": doc_name,
            "language": language,
            "country": country,
        }
        seed = annotation.export_seed_from_tree(
            {key: value for key, value in overrides.items() if value is not None}, policy, task
        )
        doc = annotation.export_tilt(task, seed, source_url=policy.source_url)
        return codec.document_to_tree(doc)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: HubConfig) -> None:
    """Run the hub on 127.0.0.1 until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host="127.0.0.1", port=config.port, log_level="warning")
