"""Guided annotation of privacy-policy text against the checklist.

A task walks a fixed queue of field-group questions in aspect order
(controller, per-category details, transfers, rights, ADM). Submissions
answer exactly the question at the cursor; present-answers must carry
text spans, whose excerpts stay re-derivable from the policy body.
Tasks are immutable values: ``submit`` returns the advanced copy.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from functools import lru_cache
from importlib import resources
from typing import Any

from ..core.codec import format_timestamp, parse_timestamp
from ..errors import (
    EmptyPolicyError,
    MissingSpanError,
    OutOfOrderError,
    SpanBoundsError,
    UnknownFieldError,
    ValidationError,
)

__all__ = [
    "STATUS_DONE",
    "STATUS_OPEN",
    "Annotation",
    "AnnotationTask",
    "FieldGroup",
    "PolicyText",
    "Question",
    "Suggestion",
    "create_task",
    "field_groups",
    "next_question",
    "policy_from_tree",
    "policy_to_tree",
    "submit",
    "suggest",
    "task_from_tree",
    "task_to_tree",
]

STATUS_OPEN = "open"
STATUS_DONE = "done"


@dataclass(frozen=True)
class FieldGroup:
    key: str
    aspect: str
    prompt: str
    keywords: tuple[str, ...]


@lru_cache(maxsize=1)
def field_groups() -> tuple[FieldGroup, ...]:
    """The fixed question queue, one group per checklist field group."""
    path = resources.files(__package__) / "data" / "field_groups.json"
    table = json.loads(path.read_text(encoding="utf-8"))
    return tuple(
        FieldGroup(
            key=group["key"],
            aspect=group["aspect"],
            prompt=group["prompt"],
            keywords=tuple(group["keywords"]),
        )
        for group in table["groups"]
    )


def _group(field: str) -> FieldGroup:
    for group in field_groups():
        if group.key == field:
            return group
    raise UnknownFieldError(f"unknown field key: {field}")


@dataclass(frozen=True)
class PolicyText:
    id: str
    body: str
    source_url: str | None = None

    @property
    def length(self) -> int:
        return len(self.body)


@dataclass(frozen=True)
class Annotation:
    field: str
    span_start: int
    span_end: int
    excerpt: str
    annotator: str
    at: datetime


@dataclass(frozen=True)
class Answer:
    present: bool


@dataclass(frozen=True)
class Question:
    field: str
    prompt: str


@dataclass(frozen=True)
class Suggestion:
    field: str
    span_start: int
    span_end: int
    confidence: float
    method: str = "keyword"


@dataclass(frozen=True)
class AnnotationTask:
    id: str
    policy_id: str
    question_queue: tuple[str, ...]
    cursor: int = 0
    answers: tuple[tuple[str, Answer], ...] = ()
    annotations: tuple[Annotation, ...] = ()
    status: str = STATUS_OPEN

    def answer(self, field: str) -> Answer | None:
        for key, value in self.answers:
            if key == field:
                return value
        return None

    def progress(self) -> float:
        return self.cursor / len(self.question_queue)


def create_task(policy: PolicyText, task_id: str | None = None) -> AnnotationTask:
    """Open a task with the full question queue; deterministic per policy."""
    if not policy.body:
        raise EmptyPolicyError(f"policy {policy.id} has an empty body")
    return AnnotationTask(
        id=task_id if task_id is not None else uuid.uuid4().hex,
        policy_id=policy.id,
        question_queue=tuple(group.key for group in field_groups()),
    )


def next_question(task: AnnotationTask) -> Question | None:
    """Question at the cursor, or None once the queue is exhausted."""
    if task.cursor >= len(task.question_queue):
        return None
    field = task.question_queue[task.cursor]
    return Question(field=field, prompt=_group(field).prompt)


def submit(
    task: AnnotationTask,
    policy: PolicyText,
    field: str,
    present: bool,
    spans: tuple[tuple[int, int], ...] = (),
    annotator: str = "anonymous",
    at: datetime | None = None,
) -> AnnotationTask:
    """Answer the cursor question; advances the cursor by exactly one."""
    if policy.id != task.policy_id:
        raise ValidationError(f"policy {policy.id} does not belong to task {task.id}", "policyId")
    if task.cursor >= len(task.question_queue):
        raise OutOfOrderError(f"task {task.id} is already done")
    expected = task.question_queue[task.cursor]
    if field != expected:
        raise OutOfOrderError(f"expected field {expected}, got {field}")
    if present and not spans:
        raise MissingSpanError(f"present answer for {field} requires at least one span")
    if not present and spans:
        raise ValidationError("spans require present=true", "spans")
    for start, end in spans:
        if not 0 <= start < end <= policy.length:
            raise SpanBoundsError(
                f"span [{start}, {end}) outside policy of length {policy.length}"
            )
    stamp = at if at is not None else datetime.now(timezone.utc)
    fresh = tuple(
        Annotation(
            field=field,
            span_start=start,
            span_end=end,
            excerpt=policy.body[start:end],
            annotator=annotator,
            at=stamp,
        )
        for start, end in spans
    )
    # last writer wins per field: drop any earlier annotations for it
    kept = tuple(entry for entry in task.annotations if entry.field != field)
    answers = tuple(item for item in task.answers if item[0] != field) + ((field, Answer(present)),)
    cursor = task.cursor + 1
    return replace(
        task,
        cursor=cursor,
        answers=answers,
        annotations=kept + fresh,
        status=STATUS_DONE if cursor == len(task.question_queue) else STATUS_OPEN,
    )


def _sentences(body: str) -> list[tuple[int, int]]:
    # boundary: . ! ? or newline followed by whitespace or an uppercase
    # letter (or end of text); spans are trimmed of surrounding space
    raw: list[tuple[int, int]] = []
    start = 0
    for i, ch in enumerate(body):
        if ch not in ".!?\n":
            continue
        nxt = body[i + 1] if i + 1 < len(body) else None
        if nxt is None or nxt.isspace() or nxt.isupper():
            raw.append((start, i + 1))
            start = i + 1
    if start < len(body):
        raw.append((start, len(body)))
    spans = []
    for begin, end in raw:
        while begin < end and body[begin].isspace():
            begin += 1
        while end > begin and body[end - 1].isspace():
            end -= 1
        if begin < end:
            spans.append((begin, end))
    return spans


def _matches(keyword: str, sentence: str) -> bool:
    # multi-word keywords match by substring, single stems by word prefix
    if " " in keyword or "." in keyword:
        return keyword in sentence
    return any(word.startswith(keyword) for word in sentence.split())


def suggest(task: AnnotationTask, policy: PolicyText, field: str) -> tuple[Suggestion, ...]:
    """Keyword-matched sentences; confidence = hits / sentence words."""
    if field not in task.question_queue:
        raise UnknownFieldError(f"unknown field key: {field}")
    keywords = _group(field).keywords
    suggestions = []
    for start, end in _sentences(policy.body):
        sentence = policy.body[start:end].lower()
        hits = sum(1 for keyword in keywords if _matches(keyword, sentence))
        if not hits:
            continue
        words = len(sentence.split())
        suggestions.append(
            Suggestion(
                field=field,
                span_start=start,
                span_end=end,
                confidence=min(1.0, hits / words),
            )
        )
    return tuple(suggestions)


# --- wire form (REST bodies and hub persistence) --------------------------


def policy_to_tree(policy: PolicyText) -> dict:
    tree: dict[str, Any] = {"id": policy.id, "body": policy.body, "length": policy.length}
    if policy.source_url is not None:
        tree["sourceUrl"] = policy.source_url
    return tree


def policy_from_tree(tree: Any) -> PolicyText:
    if not isinstance(tree, dict):
        raise ValidationError("must be an object", "")
    for key in tree:
        if key not in {"id", "sourceUrl", "body", "length"}:
            raise ValidationError("unknown field", key)
    body = tree.get("body")
    if not isinstance(body, str):
        raise ValidationError("must be text", "body")
    if not body:
        raise EmptyPolicyError("policy body must be non-empty")
    policy_id = tree.get("id", uuid.uuid4().hex)
    if not isinstance(policy_id, str) or not policy_id:
        raise ValidationError("must be non-empty text", "id")
    source = tree.get("sourceUrl")
    if source is not None and not isinstance(source, str):
        raise ValidationError("must be text", "sourceUrl")
    if "length" in tree and tree["length"] != len(body):
        raise ValidationError("must equal the character count of body", "length")
    return PolicyText(id=policy_id, body=body, source_url=source)


def task_to_tree(task: AnnotationTask) -> dict:
    return {
        "id": task.id,
        "policyId": task.policy_id,
        "questionQueue": list(task.question_queue),
        "cursor": task.cursor,
        "answers": {field: {"present": answer.present} for field, answer in task.answers},
        "annotations": [
            {
                "field": entry.field,
                "spanStart": entry.span_start,
                "spanEnd": entry.span_end,
                "excerpt": entry.excerpt,
                "annotator": entry.annotator,
                "at": format_timestamp(entry.at),
            }
            for entry in task.annotations
        ],
        "status": task.status,
    }


def task_from_tree(tree: Any) -> AnnotationTask:
    if not isinstance(tree, dict):
        raise ValidationError("must be an object", "")
    annotations = tuple(
        Annotation(
            field=item["field"],
            span_start=item["spanStart"],
            span_end=item["spanEnd"],
            excerpt=item["excerpt"],
            annotator=item["annotator"],
            at=parse_timestamp(item["at"], f"annotations/{i}/at"),
        )
        for i, item in enumerate(tree["annotations"])
    )
    answers = tuple(
        (field, Answer(bool(value["present"]))) for field, value in tree["answers"].items()
    )
    return AnnotationTask(
        id=tree["id"],
        policy_id=tree["policyId"],
        question_queue=tuple(tree["questionQueue"]),
        cursor=tree["cursor"],
        answers=answers,
        annotations=annotations,
        status=tree["status"],
    )
