from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from skillgap.corpus import Corpus, DocumentRecord  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
T0 = datetime(2022, 3, 6, 5, 0, tzinfo=timezone.utc)


def rec(body, title="", *, source="A", doc_id=None, side="demand", language="en", country="G", level=None):
    rec.counter += 1
    return DocumentRecord(
        source_id=source,
        doc_id=str(doc_id if doc_id is not None else rec.counter),
        side=side,
        language=language,
        country=country,
        title=title,
        body=body,
        level=level,
        retrieved_at=T0,
    )


rec.counter = 0


def corpus_of(*records, side="demand"):
    return Corpus(side, tuple(records))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, detail = results[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")
