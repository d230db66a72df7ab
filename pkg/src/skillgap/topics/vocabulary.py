"""Vocabulary construction for topic models."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from ..corpus import Corpus, DocumentRecord, tokenize


@lru_cache(maxsize=None)
def stopwords(language: str = "en") -> frozenset[str]:
    """Shipped stopword list for ``language`` (empty set if none ships)."""
    ref = resources.files("skillgap") / "data" / f"stopwords-{language}.txt"
    if not ref.is_file():
        return frozenset()
    words = ref.read_text(encoding="utf-8").splitlines()
    return frozenset(w.strip() for w in words if w.strip() and not w.startswith("#"))


def document_tokens(record: DocumentRecord, include_title: bool = True) -> list[str]:
    return tokenize(record.text if include_title else record.body)


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]
    doc_freq: np.ndarray
    n_docs: int
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})
        if len(self.index) != len(self.words):
            raise ValueError("vocabulary words must be unique")

    def __len__(self) -> int:
        return len(self.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            self.words == other.words
            and self.n_docs == other.n_docs
            and np.array_equal(self.doc_freq, other.doc_freq)
        )

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        """Word ids of the in-vocabulary tokens, OOV tokens dropped."""
        idx = self.index
        return np.fromiter((idx[t] for t in tokens if t in idx), dtype=np.int32)

    def checksum(self) -> str:
        return hashlib.sha256("\n".join(self.words).encode("utf-8")).hexdigest()


def build_vocabulary(
    corpus: Corpus | Sequence[Sequence[str]],
    min_df: int = 1,
    max_df_fraction: float = 1.0,
    stopword_list: Iterable[str] = (),
    include_title: bool = True,
) -> Vocabulary:
    docs = _token_lists(corpus, include_title)
    if not docs:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    stop = set(stopword_list)
    df: dict[str, int] = {}
    for tokens in docs:
        for t in set(tokens):
            df[t] = df.get(t, 0) + 1
    cap = max_df_fraction * len(docs)
    words = sorted(w for w, c in df.items() if c >= min_df and c <= cap and w not in stop)
    if not words:
        raise ValueError("vocabulary is empty after frequency and stopword filtering")
    return Vocabulary(tuple(words), np.array([df[w] for w in words], dtype=np.int64), len(docs))


def _token_lists(corpus: Corpus | Sequence[Sequence[str]], include_title: bool = True) -> list[list[str]]:
    if isinstance(corpus, Corpus):
        return [document_tokens(r, include_title) for r in corpus.records]
    return [list(doc) for doc in corpus]
