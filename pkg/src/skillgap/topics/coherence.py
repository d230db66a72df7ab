"""NPMI topic coherence from whole-document co-occurrence."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from ..corpus import Corpus
from .lda import TopicModel, top_words
from .vocabulary import _token_lists

DEFAULT_TOP_N = 10


@dataclass(frozen=True)
class CoherenceReport:
    per_topic: tuple[float, ...]
    top_n: int
    reference_id: str = ""
    flagged: tuple[tuple[int, str], ...] = field(default=())
    labels: tuple[str, ...] = ()

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_topic)) if self.per_topic else 0.0


def npmi(joint: int, count_i: int, count_j: int, n_docs: int) -> float:
    """NPMI of a word pair from document counts; -1 if the pair never co-occurs."""
    if joint == 0:
        return -1.0
    if joint == n_docs:
        return 1.0
    pmi = math.log((joint * n_docs) / (count_i * count_j))
    value = pmi / -math.log(joint / n_docs)
    return min(1.0, max(-1.0, value))


class DocumentPresence:
    """Boolean word-in-document index over a reference corpus."""

    def __init__(self, reference: Corpus | Sequence[Sequence[str]], include_title: bool = True):
        self.docs = [set(tokens) for tokens in _token_lists(reference, include_title)]
        self.n_docs = len(self.docs)
        self._cols: dict[str, np.ndarray] = {}

    def column(self, word: str) -> np.ndarray:
        col = self._cols.get(word)
        if col is None:
            col = np.fromiter((word in d for d in self.docs), dtype=bool, count=self.n_docs)
            self._cols[word] = col
        return col

    def count(self, word: str) -> int:
        return int(self.column(word).sum())

    def joint(self, a: str, b: str) -> int:
        return int(np.count_nonzero(self.column(a) & self.column(b)))


def topic_npmi(words: Sequence[str], presence: DocumentPresence) -> tuple[float, list[str]]:
    """Mean pairwise NPMI of ``words``; returns the score and the words missing from the reference.

    Pairs involving a missing word are skipped.  A topic with no scorable pair
    scores -1.
    """
    missing = [w for w in words if presence.count(w) == 0]
    present = [w for w in words if w not in missing]
    scores = [
        npmi(presence.joint(a, b), presence.count(a), presence.count(b), presence.n_docs)
        for a, b in combinations(present, 2)
    ]
    return (float(np.mean(scores)) if scores else -1.0), missing


def npmi_coherence(
    model: TopicModel,
    reference_corpus: Corpus | Sequence[Sequence[str]] | DocumentPresence,
    top_n: int = DEFAULT_TOP_N,
    reference_id: str = "",
    include_title: bool = True,
) -> CoherenceReport:
    if top_n < 2:
        raise ValueError("top_n must be >= 2")
    presence = (
        reference_corpus
        if isinstance(reference_corpus, DocumentPresence)
        else DocumentPresence(reference_corpus, include_title)
    )
    if presence.n_docs == 0:
        raise ValueError("reference corpus is empty")
    per_topic, flagged = [], []
    for k in range(model.n_topics):
        score, missing = topic_npmi(top_words(model, k, top_n), presence)
        per_topic.append(score)
        flagged.extend((k, w) for w in missing)
    labels = tuple(model.label_of(k) for k in range(model.n_topics))
    return CoherenceReport(tuple(per_topic), top_n, reference_id, tuple(flagged), labels)
