"""Polite page fetching and selector-driven record extraction.

Selectors are CSS selectors, optionally suffixed with ``@attr`` to read an
attribute of the first match instead of its text (``"a.job@href"``).
"""
from __future__ import annotations

import logging
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from bs4 import BeautifulSoup

from .corpus import Diagnostic

log = logging.getLogger(__name__)

REQUIRED_FIELDS = ("doc_id", "title", "body")
OPTIONAL_FIELDS = ("location", "company", "country", "language")
DEFAULT_DELAY = 3.0
DEFAULT_LINK_SELECTOR = "a[href]@href"


class ExtractionError(ValueError):
    def __init__(self, url: str, field_name: str):
        self.url = url
        self.field = field_name
        super().__init__(f"{url or '<page>'}: required field {field_name!r} not found")


@dataclass(frozen=True)
class PortalConfig:
    name: str
    query_url_template: str
    selectors: Mapping[str, str]
    politeness_delay: float = DEFAULT_DELAY
    link_selector: str = DEFAULT_LINK_SELECTOR
    defaults: Mapping[str, str] = field(default_factory=dict)
    retries: int = 2

    def __post_init__(self) -> None:
        missing = [f for f in REQUIRED_FIELDS if f not in self.selectors]
        if missing:
            raise ValueError(f"portal {self.name!r}: selectors missing {', '.join(missing)}")
        if self.politeness_delay < 0:
            raise ValueError(f"portal {self.name!r}: politeness_delay must be >= 0")

    @classmethod
    def from_mapping(cls, name: str, data: Mapping) -> "PortalConfig":
        return cls(
            name=name,
            query_url_template=data.get("query_url_template", ""),
            selectors=dict(data.get("selectors", {})),
            politeness_delay=float(data.get("politeness_delay", DEFAULT_DELAY)),
            link_selector=data.get("link_selector", DEFAULT_LINK_SELECTOR),
            defaults=dict(data.get("defaults", {})),
            retries=int(data.get("retries", 2)),
        )


def _default_open(url: str, timeout: float = 30.0) -> bytes:
    req = urllib.request.Request(url, headers={"User-Agent": "skillgap/0.1"})
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return resp.read()


class Fetcher:
    """Serialises requests and keeps at least ``delay`` seconds between their starts."""

    def __init__(
        self,
        delay: float = DEFAULT_DELAY,
        retries: int = 2,
        opener: Callable[[str], bytes] = _default_open,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.delay = delay
        self.retries = retries
        self.opener = opener
        self.clock = clock
        self.sleep = sleep
        self.diagnostics: list[Diagnostic] = []
        self.request_times: list[float] = []
        self._last: float | None = None
        self._lock = threading.Lock()

    def _wait(self) -> None:
        if self._last is not None:
            remaining = self.delay - (self.clock() - self._last)
            if remaining > 0:
                self.sleep(remaining)
        self._last = self.clock()
        self.request_times.append(self._last)

    def get(self, url: str) -> bytes | None:
        """Page bytes, or ``None`` after ``retries`` failed retries (recorded as a diagnostic)."""
        with self._lock:
            error: Exception | None = None
            for _ in range(self.retries + 1):
                self._wait()
                try:
                    return self.opener(url)
                except (urllib.error.URLError, OSError) as exc:
                    error = exc
                    log.info("fetch of %s failed: %s", url, exc)
            self.diagnostics.append(Diagnostic("fetch-failed", str(error), ref=url))
            return None


def _soup(page: bytes) -> BeautifulSoup:
    return BeautifulSoup(page.decode("utf-8", errors="replace"), "html.parser")


def _split_selector(selector: str) -> tuple[str, str | None]:
    css, sep, attr = selector.rpartition("@")
    if sep and css and attr and " " not in attr and "]" not in attr:
        return css.strip(), attr.strip()
    return selector.strip(), None


def _flatten(node) -> str:
    return " ".join(node.get_text(" ").split())


def select_values(soup: BeautifulSoup, selector: str) -> list[str]:
    css, attr = _split_selector(selector)
    nodes = soup.select(css)
    if attr is None:
        return [_flatten(n) for n in nodes]
    return [n[attr].strip() for n in nodes if n.has_attr(attr)]


def extract_links(page: bytes, base_url: str, selector: str = DEFAULT_LINK_SELECTOR) -> list[str]:
    links = select_values(_soup(page), selector)
    return [urllib.parse.urljoin(base_url, href) for href in links if href]


def _unique(urls: Iterable[str]) -> list[str]:
    return list(dict.fromkeys(urls))


def discover(
    config: PortalConfig,
    keywords: Sequence[str],
    fetcher: Fetcher | None = None,
    fixture_dir: str | Path | None = None,
) -> list[str]:
    """Job-page URLs found on the result pages, deduplicated in first-seen order.

    Live mode formats ``query_url_template`` with each keyword.  Fixture mode
    instead reads every ``*.html`` result page in ``fixture_dir`` (sorted by
    name) and ignores the keywords.
    """
    fetcher = fetcher or Fetcher(config.politeness_delay, config.retries)
    if fixture_dir is not None:
        pages = sorted(Path(fixture_dir).glob("*.html"))
        return _unique(
            link
            for p in pages
            for link in extract_links(p.read_bytes(), p.resolve().as_uri(), config.link_selector)
        )
    urls: list[str] = []
    for kw in keywords:
        query = config.query_url_template.format(keyword=urllib.parse.quote(kw))
        page = fetcher.get(query)
        if page is not None:
            urls.extend(extract_links(page, query, config.link_selector))
    return _unique(urls)


def extract(page: bytes, config: PortalConfig, url: str = "") -> dict[str, str]:
    """Raw record from one job page.  Missing optional fields come back empty."""
    soup = _soup(page)
    record: dict[str, str] = {"source_id": config.name}
    for name, selector in config.selectors.items():
        values = select_values(soup, selector)
        value = values[0] if values else ""
        if name in REQUIRED_FIELDS and not value:
            raise ExtractionError(url, name)
        record[name] = value
    for name in OPTIONAL_FIELDS:
        if not record.get(name):
            record[name] = config.defaults.get(name, "")
    if url:
        record["url"] = url
    return record


def crawl(
    config: PortalConfig,
    keywords: Sequence[str],
    fetcher: Fetcher | None = None,
    fixture_dir: str | Path | None = None,
) -> tuple[list[dict[str, str]], list[Diagnostic]]:
    """Discover, fetch and extract; failures become diagnostics, never exceptions."""
    fetcher = fetcher or Fetcher(0.0 if fixture_dir is not None else config.politeness_delay, config.retries)
    urls = discover(config, keywords, fetcher, fixture_dir)
    records: list[dict[str, str]] = []
    for url in urls:
        page = fetcher.get(url)
        if page is None:
            continue
        try:
            records.append(extract(page, config, url))
        except ExtractionError as exc:
            fetcher.diagnostics.append(Diagnostic("extraction-failed", str(exc), ref=url))
    return records, list(fetcher.diagnostics)
