"""Translation providers and a content-addressed translation cache."""
from __future__ import annotations

import json
import os
import re
import urllib.error
import urllib.request
from pathlib import Path
from typing import Mapping, Protocol

from .corpus import Corpus, Diagnostic, content_digest, normalize

CACHE_ENV = "SKILLGAP_CACHE_DIR"


class TranslationError(RuntimeError):
    pass


class TranslationProvider(Protocol):
    name: str

    def translate(self, text: str, source_lang: str, target_lang: str) -> str: ...


class IdentityProvider:
    name = "identity"

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        return text


class DictionaryProvider:
    """Word-for-word substitution from a ``{source: {target: {word: word}}}`` table.

    Lookups are case-insensitive; unknown words and unknown language pairs pass
    through unchanged.
    """

    name = "dictionary"
    _WORD = re.compile(r"\w+")

    def __init__(self, table: Mapping[str, Mapping[str, Mapping[str, str]]]):
        self.table = {
            src: {tgt: {k.lower(): v for k, v in words.items()} for tgt, words in pairs.items()}
            for src, pairs in table.items()
        }

    @classmethod
    def from_file(cls, path: str | Path) -> "DictionaryProvider":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        words = self.table.get(source_lang, {}).get(target_lang)
        if not words:
            return text
        return self._WORD.sub(lambda m: words.get(m.group(0).lower(), m.group(0)), text)


class HttpProvider:
    """Client for the JSON-over-HTTP contract in ``docs/providers.md``."""

    name = "http"

    def __init__(self, url: str, timeout: float = 30.0, api_key: str | None = None):
        self.url = url
        self.timeout = timeout
        self.api_key = api_key

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        payload = json.dumps(
            {"text": text, "source_lang": source_lang, "target_lang": target_lang}
        ).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(self.url, data=payload, headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise TranslationError(f"{self.url}: {exc}") from exc
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            raise TranslationError(f"{self.url}: response lacks a 'text' string")
        return body["text"]


class TranslationCache:
    """Translations keyed by (digest of the normalised source text, target language).

    With ``directory=None`` the cache lives in memory only.  On disk every
    entry is one JSON file; unreadable entries are discarded and rebuilt.
    """

    def __init__(self, directory: str | Path | None = None, namespace: str = "default"):
        self.directory = Path(directory) / namespace if directory is not None else None
        self._mem: dict[tuple[str, str], str] = {}

    @classmethod
    def from_env(cls, namespace: str = "default") -> "TranslationCache":
        return cls(os.environ.get(CACHE_ENV) or None, namespace)

    def _path(self, key: str, target: str) -> Path:
        assert self.directory is not None
        return self.directory / target / key[:2] / f"{key}.json"

    def get(self, key: str, target: str) -> str | None:
        if (key, target) in self._mem:
            return self._mem[(key, target)]
        if self.directory is None:
            return None
        path = self._path(key, target)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if entry["key"] != key or entry["target"] != target or not isinstance(entry["text"], str):
                raise ValueError("entry does not match its address")
        except (ValueError, KeyError, TypeError, UnicodeDecodeError):
            path.unlink(missing_ok=True)
            return None
        self._mem[(key, target)] = entry["text"]
        return entry["text"]

    def put(self, key: str, target: str, text: str) -> None:
        self._mem[(key, target)] = text
        if self.directory is None:
            return
        path = self._path(key, target)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(
            json.dumps({"key": key, "target": target, "text": text}, ensure_ascii=False),
            encoding="utf-8",
        )
        tmp.replace(path)


def _cached(provider, cache, text: str, source: str, target: str, calls: list[int]) -> str:
    key = content_digest(text)
    hit = cache.get(key, target)
    if hit is not None:
        return hit
    calls[0] += 1
    out = provider.translate(text, source, target)
    cache.put(key, target, out)
    return out


def translate_if_needed(
    corpus: Corpus,
    provider: TranslationProvider,
    target_language: str = "en",
    cache: TranslationCache | None = None,
) -> tuple[Corpus, list[Diagnostic], int]:
    """Translate every record not already in ``target_language``.

    Returns the new corpus, per-record diagnostics for provider failures
    (those records pass through untranslated) and the number of provider calls.
    """
    cache = cache if cache is not None else TranslationCache(None, provider.name)
    calls = [0]
    out = []
    diagnostics: list[Diagnostic] = []
    for r in corpus.records:
        if r.language == target_language:
            out.append(r)
            continue
        try:
            body = _cached(provider, cache, r.body, r.language, target_language, calls)
            title = _cached(provider, cache, r.title, r.language, target_language, calls) if r.title else ""
        except (TranslationError, OSError) as exc:
            diagnostics.append(Diagnostic("translation-failed", str(exc), ref=f"{r.source_id}/{r.doc_id}"))
            out.append(r)
            continue
        body = normalize(body)
        if not body:
            diagnostics.append(
                Diagnostic("translation-failed", "empty translation", ref=f"{r.source_id}/{r.doc_id}")
            )
            out.append(r)
            continue
        out.append(r.replace(title=title.strip(), body=body, language=target_language))
    changed = any(a is not b for a, b in zip(out, corpus.records))
    note = f"translated to {target_language} via {provider.name}" if changed else None
    return corpus.with_records(out, note), diagnostics, calls[0]


def make_provider(kind: str, dictionary: str | Path | None = None, url: str | None = None) -> TranslationProvider:
    if kind == "identity":
        return IdentityProvider()
    if kind == "dictionary":
        if dictionary is None:
            raise ValueError("dictionary provider needs a dictionary file")
        return DictionaryProvider.from_file(dictionary)
    if kind == "http":
        if not url:
            raise ValueError("http provider needs a url")
        return HttpProvider(url, api_key=os.environ.get("SKILLGAP_TRANSLATE_KEY"))
    raise ValueError(f"unknown translation provider {kind!r}")
