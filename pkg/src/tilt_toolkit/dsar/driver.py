"""Site drivers: the surface the engine acts against.

``SiteDriver`` is the abstract contract. Every call is appended to an
inspectable log before it runs, so tests can assert exactly which steps
touched the site and that resumed runs never re-invoke earlier ones.
Selectors are opaque tokens to the engine; what they address is the
driver's business.

The shipped implementation is :class:`MockDriver`, which walks a page
graph loaded from a JSON fixture instead of a browser. Pages map
selectors to effects:

- ``{"goto": pageId}``: clicking moves to another page
- ``{"flag": name}``: clicking toggles a named flag
- ``{"presentWhen": name}``: the selector exists only while the flag is set
- ``{"input": true}``: the selector accepts fill
- ``{"download": base64, "readyAfterChecks": n}``: a download that
  becomes ready once it has been checked for more than ``n`` times

The mock is deterministic given its fixture: same calls, same answers.
"""

from __future__ import annotations

import base64
import binascii
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from ..errors import DriverError, ValidationError

__all__ = [
    "DriverCall",
    "MockDriver",
    "SiteDriver",
]


@dataclass(frozen=True)
class DriverCall:
    """One recorded driver invocation: method name plus its arguments."""

    method: str
    args: tuple[str, ...]


class SiteDriver(ABC):
    """Abstract site surface.

    Subclasses implement the underscore primitives; the public methods
    record the call first, so the log covers attempts that failed.
    """

    def __init__(self) -> None:
        self.calls: list[DriverCall] = []

    def navigate(self, url: str) -> None:
        self.calls.append(DriverCall("navigate", (url,)))
        self._navigate(url)

    def exists(self, selector: str) -> bool:
        self.calls.append(DriverCall("exists", (selector,)))
        return self._exists(selector)

    def click(self, selector: str) -> None:
        self.calls.append(DriverCall("click", (selector,)))
        self._click(selector)

    def fill(self, selector: str, text: str) -> None:
        self.calls.append(DriverCall("fill", (selector, text)))
        self._fill(selector, text)

    def fetch_download(self, selector: str) -> bytes:
        self.calls.append(DriverCall("fetch_download", (selector,)))
        return self._fetch_download(selector)

    @abstractmethod
    def _navigate(self, url: str) -> None: ...

    @abstractmethod
    def _exists(self, selector: str) -> bool: ...

    @abstractmethod
    def _click(self, selector: str) -> None: ...

    @abstractmethod
    def _fill(self, selector: str, text: str) -> None: ...

    @abstractmethod
    def _fetch_download(self, selector: str) -> bytes: ...


_EFFECT_KEYS = {"goto", "flag", "presentWhen", "input", "download", "readyAfterChecks"}


def _check_fixture(tree: Any) -> None:
    if not isinstance(tree, dict):
        raise ValidationError("fixture must be an object", "")
    pages = tree.get("pages")
    if not isinstance(pages, dict) or not pages:
        raise ValidationError("must be a non-empty object", "pages")
    start = tree.get("start")
    if start not in pages:
        raise ValidationError("must name a page", "start")
    for page_id, page in pages.items():
        path = f"pages/{page_id}"
        if not isinstance(page, dict):
            raise ValidationError("page must be an object", path)
        url = page.get("url")
        if url is not None and not isinstance(url, str):
            raise ValidationError("must be text", f"{path}/url")
        selectors = page.get("selectors", {})
        if not isinstance(selectors, dict):
            raise ValidationError("must be an object", f"{path}/selectors")
        for selector, effect in selectors.items():
            effect_path = f"{path}/selectors/{selector}"
            if not isinstance(effect, dict):
                raise ValidationError("effect must be an object", effect_path)
            unknown = sorted(set(effect) - _EFFECT_KEYS)
            if unknown:
                raise ValidationError(f"unknown key {unknown[0]!r}", effect_path)
            goto = effect.get("goto")
            if goto is not None and goto not in pages:
                raise ValidationError("goto must name a page", effect_path)
            if "download" in effect:
                try:
                    base64.b64decode(effect["download"], validate=True)
                except (TypeError, binascii.Error) as exc:
                    raise ValidationError(
                        "download must be base64 text", effect_path
                    ) from exc


class MockDriver(SiteDriver):
    """Deterministic page-graph driver for tests and offline runs.

    A fresh instance starts on the fixture's ``start`` page with all
    flags clear and all readiness counters at zero, like reopening a
    browser. Flags and counters persist across ``navigate`` within one
    instance; they are site state, not page state.
    """

    def __init__(self, fixture: Any) -> None:
        super().__init__()
        _check_fixture(fixture)
        self._pages: dict[str, Any] = fixture["pages"]
        self._page: str = fixture["start"]
        self._flags: set[str] = set()
        self._checks: dict[str, int] = {}

    def _selectors(self) -> dict[str, Any]:
        return self._pages[self._page].get("selectors", {})

    def _effect(self, selector: str) -> dict | None:
        return self._selectors().get(selector)

    def _navigate(self, url: str) -> None:
        for page_id, page in self._pages.items():
            if page.get("url") == url:
                self._page = page_id
                return
        raise DriverError(f"no page at {url}")

    def _exists(self, selector: str) -> bool:
        effect = self._effect(selector)
        if effect is None:
            return False
        if "presentWhen" in effect:
            return effect["presentWhen"] in self._flags
        if "download" in effect:
            # each presence check counts toward readiness
            count = self._checks.get(selector, 0) + 1
            self._checks[selector] = count
            return count > int(effect.get("readyAfterChecks", 0))
        return True

    def _click(self, selector: str) -> None:
        effect = self._effect(selector)
        if effect is None:
            raise DriverError(f"nothing to click at {selector}")
        if "goto" in effect:
            self._page = effect["goto"]
        elif "flag" in effect:
            flag = effect["flag"]
            if flag in self._flags:
                self._flags.discard(flag)
            else:
                self._flags.add(flag)
        else:
            raise DriverError(f"not clickable: {selector}")

    def _fill(self, selector: str, text: str) -> None:
        effect = self._effect(selector)
        if effect is None or not effect.get("input"):
            raise DriverError(f"not fillable: {selector}")

    def _fetch_download(self, selector: str) -> bytes:
        effect = self._effect(selector)
        if effect is None or "download" not in effect:
            raise DriverError(f"no download at {selector}")
        # ready once the configured number of checks has completed, so a
        # readyAfterChecks of zero is fetchable without any prior check
        if self._checks.get(selector, 0) < int(effect.get("readyAfterChecks", 0)):
            raise DriverError(f"download not ready: {selector}")
        return base64.b64decode(effect["download"], validate=True)
