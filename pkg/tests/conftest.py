"""Shared fixtures: parsed sample documents and fixture paths."""

from __future__ import annotations

from pathlib import Path

import pytest

from tilt_toolkit.core import codec

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def minimal_text() -> str:
    return (FIXTURES / "minimal.tilt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def complete_text() -> str:
    return (FIXTURES / "complete.tilt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def minimal_doc(minimal_text):
    return codec.parse(minimal_text)


@pytest.fixture(scope="session")
def complete_doc(complete_text):
    return codec.parse(complete_text)
