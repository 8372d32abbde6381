"""Access-request automation: descriptors, engine, drivers, registry."""

from .descriptor import (
    CONDITION_DOWNLOAD_READY,
    CONDITION_SELECTOR_PRESENT,
    FORMAT_VERSION,
    IDENTITY_REFS,
    REF_EMAIL,
    REF_FULL_NAME,
    Click,
    Download,
    DsarDescriptor,
    Fill,
    LiteralValue,
    Navigate,
    Poll,
    Step,
    WaitFor,
    descriptor_from_tree,
    descriptor_hash,
    descriptor_to_tree,
    validate_descriptor,
)
from .driver import DriverCall, MockDriver, SiteDriver
from .engine import (
    STATUS_DONE,
    STATUS_FAILED,
    STATUS_PENDING,
    STATUS_RUNNING,
    STATUS_WAITING,
    STATUSES,
    Artifact,
    Clock,
    DsarSession,
    Failure,
    SystemClock,
    VirtualClock,
    execute,
    session_from_tree,
    session_json,
    session_to_tree,
)
from .registry import (
    DIFFICULTIES,
    RegistryRecord,
    parse_registry,
    record_to_tree,
    registry_from_tree,
    registry_lookup,
)

__all__ = [
    "Artifact",
    "CONDITION_DOWNLOAD_READY",
    "CONDITION_SELECTOR_PRESENT",
    "Click",
    "Clock",
    "DIFFICULTIES",
    "Download",
    "DriverCall",
    "DsarDescriptor",
    "DsarSession",
    "FORMAT_VERSION",
    "Failure",
    "Fill",
    "IDENTITY_REFS",
    "LiteralValue",
    "MockDriver",
    "Navigate",
    "Poll",
    "REF_EMAIL",
    "REF_FULL_NAME",
    "RegistryRecord",
    "STATUSES",
    "STATUS_DONE",
    "STATUS_FAILED",
    "STATUS_PENDING",
    "STATUS_RUNNING",
    "STATUS_WAITING",
    "SiteDriver",
    "Step",
    "SystemClock",
    "VirtualClock",
    "WaitFor",
    "descriptor_from_tree",
    "descriptor_hash",
    "descriptor_to_tree",
    "execute",
    "parse_registry",
    "record_to_tree",
    "registry_from_tree",
    "registry_lookup",
    "session_from_tree",
    "session_json",
    "session_to_tree",
    "validate_descriptor",
]
