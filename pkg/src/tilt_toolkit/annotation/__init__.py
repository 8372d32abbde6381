"""Guided policy annotation and export to the document format."""

from .export import ExportSeed, export_seed_from_tree, export_tilt
from .flow import (
    STATUS_DONE,
    STATUS_OPEN,
    Annotation,
    AnnotationTask,
    FieldGroup,
    PolicyText,
    Question,
    Suggestion,
    create_task,
    field_groups,
    next_question,
    policy_from_tree,
    policy_to_tree,
    submit,
    suggest,
    task_from_tree,
    task_to_tree,
)

__all__ = [
    "STATUS_DONE",
    "STATUS_OPEN",
    "Annotation",
    "AnnotationTask",
    "ExportSeed",
    "FieldGroup",
    "PolicyText",
    "Question",
    "Suggestion",
    "create_task",
    "export_seed_from_tree",
    "export_tilt",
    "field_groups",
    "next_question",
    "policy_from_tree",
    "policy_to_tree",
    "submit",
    "suggest",
    "task_from_tree",
    "task_to_tree",
]
