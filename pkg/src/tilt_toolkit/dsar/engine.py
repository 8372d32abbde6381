"""Resumable execution of access-request descriptors.

The engine walks a descriptor's steps strictly in order against a
:class:`~tilt_toolkit.dsar.driver.SiteDriver`. Waits run on an
injectable clock, so tests finish on virtual time. A run that exhausts
a waitFor timeout parks the session as ``waiting``; the caller persists
the session and resumes later with a driver positioned where the last
run stopped (steps before the resume point are never re-invoked). A
condition a poll cannot meet, or any error the driver raises, is
recorded on the session as a failure rather than thrown, which is how
an unattended run has to behave.

Identity values are handed to the driver only as fill arguments, and
downloaded bytes are written only under the caller-supplied artifact
directory; nothing personal leaves the machine.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Protocol

from ..core.codec import canonical_json
from ..errors import IoError, ResumeMismatchError, ValidationError
from .descriptor import (
    CONDITION_DOWNLOAD_READY,
    Click,
    Download,
    DsarDescriptor,
    Fill,
    LiteralValue,
    Navigate,
    Poll,
    WaitFor,
    descriptor_from_tree,
    descriptor_hash,
    descriptor_to_tree,
)
from .driver import SiteDriver

__all__ = [
    "Artifact",
    "Clock",
    "DsarSession",
    "Failure",
    "STATUSES",
    "STATUS_DONE",
    "STATUS_FAILED",
    "STATUS_PENDING",
    "STATUS_RUNNING",
    "STATUS_WAITING",
    "SystemClock",
    "VirtualClock",
    "execute",
    "session_from_tree",
    "session_json",
    "session_to_tree",
]

STATUS_PENDING = "pending"
STATUS_RUNNING = "running"
STATUS_WAITING = "waiting"
STATUS_DONE = "done"
STATUS_FAILED = "failed"
STATUSES = (STATUS_PENDING, STATUS_RUNNING, STATUS_WAITING, STATUS_DONE, STATUS_FAILED)

# waitFor re-checks its condition this often
_WAIT_RECHECK_SECONDS = 1.0


class Clock(Protocol):
    def now(self) -> float: ...

    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    """Wall-clock time for real runs."""

    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)


class VirtualClock:
    """Time that only moves when slept; keeps wait-heavy tests instant."""

    def __init__(self, start: float = 0.0) -> None:
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def sleep(self, seconds: float) -> None:
        self._now += max(0.0, seconds)


@dataclass(frozen=True)
class Artifact:
    """One downloaded file, stored under the caller's artifact directory."""

    name: str
    byte_length: int
    local_path: str


@dataclass(frozen=True)
class Failure:
    step_index: int
    reason: str


@dataclass(frozen=True)
class DsarSession:
    """Progress of one descriptor run; serializable for resume."""

    descriptor: DsarDescriptor
    step_index: int
    status: str
    artifacts: tuple[Artifact, ...] = ()
    failure: Failure | None = None


def _identity_value(ref: Any, identity: Mapping[str, str]) -> str:
    if isinstance(ref, LiteralValue):
        return ref.text
    return identity[ref]


def _check_identity(
    descriptor: DsarDescriptor, identity: Mapping[str, str], start: int
) -> None:
    # fail before touching the driver rather than mid-run
    for step in descriptor.steps[start:]:
        if isinstance(step, Fill) and not isinstance(step.value_ref, LiteralValue):
            if not isinstance(identity.get(step.value_ref), str):
                raise ValidationError("missing or not text", f"identity/{step.value_ref}")


def _condition_selector(descriptor: DsarDescriptor, index: int) -> str:
    """Selector a waitFor/poll condition is checked against.

    An unqualified download-ready condition guards the next download
    step; descriptor validation guarantees that step exists.
    """
    step = descriptor.steps[index]
    assert isinstance(step, (WaitFor, Poll))
    if step.selector is not None:
        return step.selector
    for later in descriptor.steps[index + 1 :]:
        if isinstance(later, Download):
            return later.selector
    raise AssertionError(f"unreachable: step {index} passed descriptor validation")


def execute(
    descriptor: DsarDescriptor,
    driver: SiteDriver,
    identity: Mapping[str, str],
    out_dir: str | Path,
    resume: DsarSession | None = None,
    clock: Clock | None = None,
) -> DsarSession:
    """Run the descriptor's steps from the start or a resumed session.

    Returns a session whose status is ``done``, ``waiting`` (a waitFor
    timed out; resume later), or ``failed`` (a poll exhausted its
    attempts or the driver raised). Downloaded artifacts are written
    under ``out_dir``; artifacts from a resumed session are carried
    over. Only filesystem trouble surfaces as an exception (IoError),
    besides ResumeMismatchError when the session and descriptor do not
    belong together.
    """
    clock = clock if clock is not None else SystemClock()
    start = 0
    artifacts: list[Artifact] = []
    if resume is not None:
        if descriptor_hash(resume.descriptor) != descriptor_hash(descriptor):
            raise ResumeMismatchError("session belongs to a different descriptor")
        start = resume.step_index
        artifacts = list(resume.artifacts)
    _check_identity(descriptor, identity, start)

    root = Path(out_dir)
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create artifact directory: {exc}") from exc

    def finish(index: int, status: str, failure: Failure | None = None) -> DsarSession:
        return DsarSession(
            descriptor=descriptor,
            step_index=index,
            status=status,
            artifacts=tuple(artifacts),
            failure=failure,
        )

    for index in range(start, len(descriptor.steps)):
        step = descriptor.steps[index]
        try:
            if isinstance(step, Navigate):
                driver.navigate(step.url)
            elif isinstance(step, Click):
                driver.click(step.selector)
            elif isinstance(step, Fill):
                driver.fill(step.selector, _identity_value(step.value_ref, identity))
            elif isinstance(step, WaitFor):
                selector = _condition_selector(descriptor, index)
                deadline = clock.now() + step.timeout_seconds
                met = driver.exists(selector)
                while not met and clock.now() < deadline:
                    clock.sleep(min(_WAIT_RECHECK_SECONDS, deadline - clock.now()))
                    met = driver.exists(selector)
                if not met:
                    # not a failure: the site may simply need more time
                    return finish(index, STATUS_WAITING)
            elif isinstance(step, Poll):
                selector = _condition_selector(descriptor, index)
                met = False
                for attempt in range(step.max_attempts):
                    met = driver.exists(selector)
                    if met:
                        break
                    if attempt + 1 < step.max_attempts:
                        clock.sleep(step.interval_seconds)
                if not met:
                    return finish(index, STATUS_FAILED, Failure(index, "condition not met"))
            elif isinstance(step, Download):
                data = driver.fetch_download(step.selector)
                name = f"download-{index}.bin"
                path = root / name
                try:
                    path.write_bytes(data)
                except OSError as exc:
                    raise IoError(f"cannot write artifact: {exc}") from exc
                artifacts.append(Artifact(name, len(data), str(path)))
        except (IoError, ResumeMismatchError):
            raise
        except Exception as exc:
            # driver trouble is recorded, never thrown past the session
            return finish(index, STATUS_FAILED, Failure(index, str(exc)))
    return finish(len(descriptor.steps), STATUS_DONE)


# --- session wire form -----------------------------------------------------


def session_to_tree(session: DsarSession) -> dict:
    tree: dict[str, Any] = {
        "descriptor": descriptor_to_tree(session.descriptor),
        "stepIndex": session.step_index,
        "status": session.status,
        "artifacts": [
            {
                "name": artifact.name,
                "byteLength": artifact.byte_length,
                "localPath": artifact.local_path,
            }
            for artifact in session.artifacts
        ],
    }
    if session.failure is not None:
        tree["failure"] = {
            "stepIndex": session.failure.step_index,
            "reason": session.failure.reason,
        }
    return tree


def session_json(session: DsarSession) -> str:
    """Canonical text form; equal sessions serialize to equal bytes."""
    return canonical_json(session_to_tree(session))


def session_from_tree(tree: Any) -> DsarSession:
    if not isinstance(tree, dict):
        raise ValidationError("session must be an object", "")
    unknown = sorted(set(tree) - {"descriptor", "stepIndex", "status", "artifacts", "failure"})
    if unknown:
        raise ValidationError(f"unknown field {unknown[0]!r}", "")
    descriptor = descriptor_from_tree(tree.get("descriptor"))
    step_index = tree.get("stepIndex")
    if isinstance(step_index, bool) or not isinstance(step_index, int):
        raise ValidationError("must be an integer", "stepIndex")
    if not 0 <= step_index <= len(descriptor.steps):
        raise ValidationError("out of range", "stepIndex")
    status = tree.get("status")
    if status not in STATUSES:
        raise ValidationError(f"must be one of {', '.join(STATUSES)}", "status")
    # done means every step completed, and completing every step means done
    if (status == STATUS_DONE) != (step_index == len(descriptor.steps)):
        raise ValidationError("status and stepIndex disagree", "status")
    raw_artifacts = tree.get("artifacts", [])
    if not isinstance(raw_artifacts, list):
        raise ValidationError("must be an array", "artifacts")
    artifacts = []
    for position, raw in enumerate(raw_artifacts):
        path = f"artifacts/{position}"
        if not isinstance(raw, dict) or set(raw) != {"name", "byteLength", "localPath"}:
            raise ValidationError("must have name, byteLength, localPath", path)
        if not isinstance(raw["name"], str) or not raw["name"]:
            raise ValidationError("must be non-empty text", f"{path}/name")
        length = raw["byteLength"]
        if isinstance(length, bool) or not isinstance(length, int) or length < 0:
            raise ValidationError("must be a non-negative integer", f"{path}/byteLength")
        if not isinstance(raw["localPath"], str):
            raise ValidationError("must be text", f"{path}/localPath")
        artifacts.append(Artifact(raw["name"], length, raw["localPath"]))
    failure = None
    raw_failure = tree.get("failure")
    if raw_failure is not None:
        if not isinstance(raw_failure, dict) or set(raw_failure) != {"stepIndex", "reason"}:
            raise ValidationError("must have stepIndex and reason", "failure")
        failure_index = raw_failure["stepIndex"]
        if isinstance(failure_index, bool) or not isinstance(failure_index, int):
            raise ValidationError("must be an integer", "failure/stepIndex")
        if not isinstance(raw_failure["reason"], str):
            raise ValidationError("must be text", "failure/reason")
        failure = Failure(failure_index, raw_failure["reason"])
    return DsarSession(
        descriptor=descriptor,
        step_index=step_index,
        status=status,
        artifacts=tuple(artifacts),
        failure=failure,
    )
