"""Document records, normalisation, deduplication and JSON Lines persistence."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

SIDES = ("demand", "supply")
LEVELS = ("bachelor", "master", "none")

_WS = re.compile(r"\s+")

# Relevance keyword per corpus language; keys are the canonical (English) keyword.
DEFAULT_KEYWORD_TABLE: dict[str, dict[str, str]] = {
    "security": {"en": "security", "de": "sicherheit"},
}

DEFAULT_MIN_BODY_COUNT = 3


@dataclass(frozen=True)
class Diagnostic:
    """One rejected input item.  Serialised as a single JSON object."""

    kind: str
    message: str
    line: int | None = None
    ref: str | None = None

    def to_json(self) -> str:
        payload = {k: v for k, v in dataclasses.asdict(self).items() if v is not None}
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def normalize(text: str) -> str:
    """NFC, lowercase, collapse whitespace runs, trim."""
    return _WS.sub(" ", unicodedata.normalize("NFC", text).lower()).strip()


def content_digest(text: str) -> str:
    return hashlib.sha256(normalize(text).encode("utf-8")).hexdigest()


def tokenize(text: str) -> list[str]:
    """Split normalised text on every character that is not a letter or digit."""
    tokens: list[str] = []
    buf: list[str] = []
    for ch in normalize(text):
        if ch.isalnum():
            buf.append(ch)
        elif buf:
            tokens.append("".join(buf))
            buf.clear()
    if buf:
        tokens.append("".join(buf))
    return tokens


def _utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return _utc(ts).isoformat().replace("+00:00", "Z")


def parse_timestamp(value: str) -> datetime:
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    return _utc(datetime.fromisoformat(value))


@dataclass(frozen=True)
class DocumentRecord:
    source_id: str
    doc_id: str
    side: str
    language: str
    country: str
    title: str
    body: str
    retrieved_at: datetime
    level: str | None = None
    content_hash: str = ""

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise ValueError(f"unknown side {self.side!r}")
        if self.level is not None and self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}")
        object.__setattr__(self, "retrieved_at", _utc(self.retrieved_at))
        object.__setattr__(self, "content_hash", content_digest(self.body))

    @property
    def text(self) -> str:
        return f"{self.title} {self.body}"

    def replace(self, **changes: Any) -> "DocumentRecord":
        changes.pop("content_hash", None)
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "source_id": self.source_id,
            "doc_id": self.doc_id,
            "side": self.side,
            "language": self.language,
            "country": self.country,
            "title": self.title,
            "body": self.body,
            "level": self.level,
            "retrieved_at": format_timestamp(self.retrieved_at),
            "content_hash": self.content_hash,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DocumentRecord":
        record = cls(
            source_id=str(data["source_id"]),
            doc_id=str(data["doc_id"]),
            side=data["side"],
            language=data.get("language") or "und",
            country=data.get("country") or "",
            title=data.get("title") or "",
            body=data["body"],
            level=data.get("level"),
            retrieved_at=parse_timestamp(data["retrieved_at"]),
        )
        stored = data.get("content_hash")
        if stored and stored != record.content_hash:
            raise ValueError(f"content_hash mismatch for {record.source_id}/{record.doc_id}")
        return record


@dataclass(frozen=True)
class Corpus:
    side: str
    records: tuple[DocumentRecord, ...] = ()
    provenance: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        for r in self.records:
            if r.side != self.side:
                raise ValueError(f"record {r.doc_id!r} has side {r.side!r}, corpus is {self.side!r}")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[DocumentRecord]:
        return iter(self.records)

    def with_records(self, records: Iterable[DocumentRecord], note: str | None = None) -> "Corpus":
        prov = self.provenance if note is None else "; ".join(p for p in (self.provenance, note) if p)
        return Corpus(self.side, tuple(records), prov)


@dataclass(frozen=True)
class DedupStats:
    removed_by_id: int
    removed_by_hash: int


@dataclass
class CorpusSummary:
    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _coerce_raw(item: str | Mapping[str, Any], lineno: int) -> Mapping[str, Any]:
    if isinstance(item, Mapping):
        return item
    data = json.loads(item)
    if not isinstance(data, dict):
        raise ValueError("expected a JSON object")
    return data


def ingest_records(
    raw: Iterable[str | Mapping[str, Any]],
    side: str,
    *,
    now: datetime | None = None,
    provenance: str = "",
) -> tuple[Corpus, list[Diagnostic]]:
    """Validate and normalise raw records (JSON lines or dicts) into a corpus.

    Bad items are reported as diagnostics and skipped; ingestion never stops on
    a single record.  Blank lines are ignored.
    """
    stamp = now or datetime.now(timezone.utc)
    records: list[DocumentRecord] = []
    diagnostics: list[Diagnostic] = []
    for lineno, item in enumerate(raw, start=1):
        if isinstance(item, str) and not item.strip():
            continue
        try:
            data = _coerce_raw(item, lineno)
        except ValueError as exc:
            diagnostics.append(Diagnostic("malformed", str(exc), line=lineno))
            continue
        missing = [k for k in ("source_id", "title", "body") if data.get(k) is None]
        if missing:
            diagnostics.append(
                Diagnostic("missing-field", f"missing {', '.join(missing)}", line=lineno)
            )
            continue
        body = normalize(str(data["body"]))
        ref = f"{data['source_id']}/{data.get('doc_id', '')}"
        if not body:
            diagnostics.append(Diagnostic("empty-body", "body is empty after normalization", lineno, ref))
            continue
        doc_id = data.get("doc_id")
        try:
            retrieved = parse_timestamp(data["retrieved_at"]) if data.get("retrieved_at") else stamp
            record = DocumentRecord(
                source_id=str(data["source_id"]),
                doc_id=str(doc_id) if doc_id not in (None, "") else content_digest(body),
                side=side,
                language=str(data.get("language") or "und"),
                country=str(data.get("country") or ""),
                title=str(data["title"]).strip(),
                body=body,
                level=data.get("level"),
                retrieved_at=retrieved,
            )
        except (ValueError, TypeError) as exc:
            diagnostics.append(Diagnostic("invalid", str(exc), lineno, ref))
            continue
        records.append(record)
    return Corpus(side, tuple(records), provenance), diagnostics


def dedup(corpus: Corpus) -> tuple[Corpus, DedupStats]:
    """Drop repeated (source_id, doc_id) pairs, then repeated body hashes.

    The earliest occurrence wins in both passes and survivor order is kept.
    """
    seen_ids: set[tuple[str, str]] = set()
    first: list[DocumentRecord] = []
    for r in corpus.records:
        key = (r.source_id, r.doc_id)
        if key not in seen_ids:
            seen_ids.add(key)
            first.append(r)
    seen_hashes: set[str] = set()
    second: list[DocumentRecord] = []
    for r in first:
        if r.content_hash not in seen_hashes:
            seen_hashes.add(r.content_hash)
            second.append(r)
    stats = DedupStats(len(corpus.records) - len(first), len(first) - len(second))
    return corpus.with_records(second), stats


def filter_relevant(
    corpus: Corpus,
    keyword: str = "security",
    min_body_count: int = DEFAULT_MIN_BODY_COUNT,
    keyword_table: Mapping[str, Mapping[str, str]] | None = None,
) -> Corpus:
    """Keep records whose title contains the keyword or whose body repeats it.

    The keyword is looked up per record language in ``keyword_table``; body
    occurrences are counted as non-overlapping substrings of the normalised body.
    """
    if not keyword:
        raise ValueError("keyword must be non-empty")
    if min_body_count < 1:
        raise ValueError("min_body_count must be >= 1")
    table = DEFAULT_KEYWORD_TABLE if keyword_table is None else keyword_table
    base = normalize(keyword)
    variants = {normalize(lang): normalize(kw) for lang, kw in table.get(base, {}).items()}
    kept = []
    for r in corpus.records:
        kw = variants.get(r.language, base)
        if kw in normalize(r.title) or normalize(r.body).count(kw) >= min_body_count:
            kept.append(r)
    return corpus.with_records(kept)


def summarize(corpus: Corpus | Iterable[DocumentRecord]) -> CorpusSummary:
    counts = Counter((r.country, r.language) for r in corpus)
    return CorpusSummary(dict(counts))


def render_summary(
    summary: CorpusSummary,
    row_label: str = "Number of documents",
    columns: Sequence[tuple[str, str]] | None = None,
    language_labels: Mapping[str, str] | None = None,
) -> str:
    """Two-row pipe table, one column per (country, language) cell."""
    cols = list(columns) if columns is not None else sorted(summary.counts)
    labels = language_labels or {}
    head = ["Country (language)"] + [f"{c} ({labels.get(lang, lang)})" for c, lang in cols]
    row = [row_label] + [str(summary.counts.get(col, 0)) for col in cols]
    return "| " + " | ".join(head) + " |\n| " + " | ".join(row) + " |\n"


def _meta_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in corpus.records:
            fh.write(json.dumps(r.to_dict(), ensure_ascii=False) + "\n")
    meta = {"side": corpus.side, "provenance": corpus.provenance}
    _meta_path(path).write_text(json.dumps(meta, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8")


def read_corpus(path: str | Path, side: str | None = None) -> Corpus:
    path = Path(path)
    meta: dict[str, Any] = {}
    if _meta_path(path).exists():
        meta = json.loads(_meta_path(path).read_text(encoding="utf-8"))
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(DocumentRecord.from_dict(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    resolved = side or meta.get("side") or (records[0].side if records else None)
    if resolved is None:
        raise ValueError(f"{path}: cannot determine corpus side of an empty file")
    return Corpus(resolved, tuple(records), meta.get("provenance", ""))
