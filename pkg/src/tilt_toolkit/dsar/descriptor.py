"""Machine-readable access-request descriptors.

A descriptor records the click path from a service's landing page to a
finished data export as an ordered list of steps. Files carry the
format tag ``dara/1`` and conventionally use the ``.dara.json``
extension. New services are supported by writing a new descriptor file,
never by changing engine code. This module owns parsing, validation,
serialization, and the content hash that ties a resumed session to the
descriptor it was started from; execution semantics live in
:mod:`tilt_toolkit.dsar.engine`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Union

from ..core.codec import canonical_json
from ..errors import DescriptorError, TiltSyntaxError

__all__ = [
    "CONDITION_DOWNLOAD_READY",
    "CONDITION_SELECTOR_PRESENT",
    "Click",
    "Download",
    "DsarDescriptor",
    "FORMAT_VERSION",
    "Fill",
    "IDENTITY_REFS",
    "LiteralValue",
    "Navigate",
    "Poll",
    "REF_EMAIL",
    "REF_FULL_NAME",
    "Step",
    "WaitFor",
    "descriptor_from_tree",
    "descriptor_hash",
    "descriptor_to_tree",
    "validate_descriptor",
]

FORMAT_VERSION = "dara/1"

CONDITION_SELECTOR_PRESENT = "selector-present"
CONDITION_DOWNLOAD_READY = "download-ready"
_CONDITIONS = (CONDITION_SELECTOR_PRESENT, CONDITION_DOWNLOAD_READY)

# identity references a Fill step may use instead of a literal value
REF_EMAIL = "EMAIL"
REF_FULL_NAME = "FULL_NAME"
IDENTITY_REFS = (REF_EMAIL, REF_FULL_NAME)


@dataclass(frozen=True)
class LiteralValue:
    """Fixed text for a Fill step, as opposed to an identity reference."""

    text: str


@dataclass(frozen=True)
class Navigate:
    url: str


@dataclass(frozen=True)
class Click:
    selector: str


@dataclass(frozen=True)
class Fill:
    selector: str
    value_ref: Union[str, LiteralValue]


@dataclass(frozen=True)
class WaitFor:
    """Re-check a condition until met or ``timeout_seconds`` elapsed."""

    condition: str
    timeout_seconds: float
    selector: str | None = None


@dataclass(frozen=True)
class Poll:
    """Check a condition a bounded number of times, pausing in between."""

    condition: str
    interval_seconds: float
    max_attempts: int
    selector: str | None = None


@dataclass(frozen=True)
class Download:
    selector: str


Step = Union[Navigate, Click, Fill, WaitFor, Poll, Download]

NAVIGATE_KIND = "navigate"
CLICK_KIND = "click"
FILL_KIND = "fill"
WAIT_FOR_KIND = "waitFor"
POLL_KIND = "poll"
DOWNLOAD_KIND = "download"


@dataclass(frozen=True)
class DsarDescriptor:
    """Validated click path for one service's access request."""

    service: str
    domain: str
    steps: tuple[Step, ...]
    format_version: str = FORMAT_VERSION


# --- reading: plain trees to typed steps ----------------------------------


def _step_text(tree: dict, key: str, index: int) -> str:
    value = tree.get(key)
    if not isinstance(value, str) or not value:
        raise DescriptorError(f"{key} must be non-empty text", index)
    return value


def _step_number(tree: dict, key: str, index: int) -> float:
    value = tree.get(key)
    # bool is an int subtype; keep it out of numeric slots
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DescriptorError(f"{key} must be a number", index)
    if value <= 0:
        raise DescriptorError(f"{key} must be greater than zero", index)
    return value


def _step_keys(tree: dict, allowed: set[str], index: int) -> None:
    unknown = sorted(set(tree) - allowed - {"kind"})
    if unknown:
        raise DescriptorError(f"unknown field {unknown[0]!r}", index)


def _condition(tree: dict, index: int) -> tuple[str, str | None]:
    condition = tree.get("condition")
    if condition not in _CONDITIONS:
        raise DescriptorError(
            "condition must be selector-present or download-ready", index
        )
    selector = tree.get("selector")
    if selector is not None and (not isinstance(selector, str) or not selector):
        raise DescriptorError("selector must be non-empty text", index)
    if condition == CONDITION_SELECTOR_PRESENT and selector is None:
        raise DescriptorError("selector-present requires a selector", index)
    return condition, selector


def _value_ref(tree: dict, index: int) -> Union[str, LiteralValue]:
    ref = tree.get("valueRef")
    if isinstance(ref, str) and ref in IDENTITY_REFS:
        return ref
    if isinstance(ref, dict) and set(ref) == {"literal"}:
        text = ref["literal"]
        if isinstance(text, str):
            return LiteralValue(text)
    raise DescriptorError(
        "valueRef must be EMAIL, FULL_NAME, or {\"literal\": text}", index
    )


def step_from_tree(tree: Any, index: int) -> Step:
    """Read one step; rule violations name the offending step index."""
    if not isinstance(tree, dict):
        raise DescriptorError("step must be an object", index)
    kind = tree.get("kind")
    if kind == NAVIGATE_KIND:
        _step_keys(tree, {"url"}, index)
        return Navigate(url=_step_text(tree, "url", index))
    if kind == CLICK_KIND:
        _step_keys(tree, {"selector"}, index)
        return Click(selector=_step_text(tree, "selector", index))
    if kind == FILL_KIND:
        _step_keys(tree, {"selector", "valueRef"}, index)
        return Fill(
            selector=_step_text(tree, "selector", index),
            value_ref=_value_ref(tree, index),
        )
    if kind == WAIT_FOR_KIND:
        _step_keys(tree, {"condition", "selector", "timeoutSeconds"}, index)
        condition, selector = _condition(tree, index)
        return WaitFor(
            condition=condition,
            timeout_seconds=_step_number(tree, "timeoutSeconds", index),
            selector=selector,
        )
    if kind == POLL_KIND:
        _step_keys(
            tree, {"condition", "selector", "intervalSeconds", "maxAttempts"}, index
        )
        condition, selector = _condition(tree, index)
        attempts = tree.get("maxAttempts")
        if isinstance(attempts, bool) or not isinstance(attempts, int):
            raise DescriptorError("maxAttempts must be an integer", index)
        if attempts < 1:
            raise DescriptorError("maxAttempts must be at least 1", index)
        return Poll(
            condition=condition,
            interval_seconds=_step_number(tree, "intervalSeconds", index),
            max_attempts=attempts,
            selector=selector,
        )
    if kind == DOWNLOAD_KIND:
        _step_keys(tree, {"selector"}, index)
        return Download(selector=_step_text(tree, "selector", index))
    raise DescriptorError(f"unknown step kind {kind!r}", index)


def _check_step_order(steps: tuple[Step, ...]) -> None:
    if not isinstance(steps[0], Navigate):
        raise DescriptorError("first step must be navigate", 0)
    for index, step in enumerate(steps):
        if (
            isinstance(step, (WaitFor, Poll))
            and step.condition == CONDITION_DOWNLOAD_READY
            and step.selector is None
        ):
            # the engine checks an unqualified download-ready against the
            # next download step's selector, so one must exist
            trailing = steps[index + 1 :]
            if not any(isinstance(later, Download) for later in trailing):
                raise DescriptorError(
                    "download-ready without a selector needs a later download step",
                    index,
                )


def descriptor_from_tree(tree: Any) -> DsarDescriptor:
    """Read and validate a whole descriptor tree."""
    if not isinstance(tree, dict):
        raise DescriptorError("descriptor must be an object")
    unknown = sorted(set(tree) - {"formatVersion", "service", "domain", "steps"})
    if unknown:
        raise DescriptorError(f"unknown field {unknown[0]!r}")
    if tree.get("formatVersion") != FORMAT_VERSION:
        raise DescriptorError(f"formatVersion must be {FORMAT_VERSION!r}")
    for key in ("service", "domain"):
        if not isinstance(tree.get(key), str) or not tree[key]:
            raise DescriptorError(f"{key} must be non-empty text")
    raw_steps = tree.get("steps")
    if not isinstance(raw_steps, list) or not raw_steps:
        raise DescriptorError("steps must be a non-empty array")
    steps = tuple(step_from_tree(step, index) for index, step in enumerate(raw_steps))
    _check_step_order(steps)
    return DsarDescriptor(service=tree["service"], domain=tree["domain"], steps=steps)


def validate_descriptor(text: str) -> DsarDescriptor:
    """Parse descriptor text, distinguishing syntax from rule failures."""
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TiltSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    return descriptor_from_tree(tree)


# --- writing: typed steps to plain trees ----------------------------------


def step_to_tree(step: Step) -> dict:
    if isinstance(step, Navigate):
        return {"kind": NAVIGATE_KIND, "url": step.url}
    if isinstance(step, Click):
        return {"kind": CLICK_KIND, "selector": step.selector}
    if isinstance(step, Fill):
        ref: Any = step.value_ref
        if isinstance(ref, LiteralValue):
            ref = {"literal": ref.text}
        return {"kind": FILL_KIND, "selector": step.selector, "valueRef": ref}
    if isinstance(step, WaitFor):
        tree: dict[str, Any] = {
            "kind": WAIT_FOR_KIND,
            "condition": step.condition,
            "timeoutSeconds": step.timeout_seconds,
        }
        if step.selector is not None:
            tree["selector"] = step.selector
        return tree
    if isinstance(step, Poll):
        tree = {
            "kind": POLL_KIND,
            "condition": step.condition,
            "intervalSeconds": step.interval_seconds,
            "maxAttempts": step.max_attempts,
        }
        if step.selector is not None:
            tree["selector"] = step.selector
        return tree
    if isinstance(step, Download):
        return {"kind": DOWNLOAD_KIND, "selector": step.selector}
    raise TypeError(f"not a step: {step!r}")


def descriptor_to_tree(descriptor: DsarDescriptor) -> dict:
    return {
        "formatVersion": descriptor.format_version,
        "service": descriptor.service,
        "domain": descriptor.domain,
        "steps": [step_to_tree(step) for step in descriptor.steps],
    }


def descriptor_hash(descriptor: DsarDescriptor) -> str:
    """SHA-256 over the canonical bytes; matches sessions to descriptors."""
    text = canonical_json(descriptor_to_tree(descriptor))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
