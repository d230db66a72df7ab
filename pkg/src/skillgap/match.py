"""Fuzzy token-set scoring of documents against taxonomy categories."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, Iterable

import numpy as np

from . import _kernels
from .corpus import Corpus, DocumentRecord, tokenize
from .taxonomy import L1, SkillCategory, Taxonomy

DEFAULT_THRESHOLD = 90


def _codepoints(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("utf-32-le"), dtype="<u4")


def lcs_length(s1: str, s2: str) -> int:
    if not s1 or not s2:
        return 0
    return int(_kernels.lcs_length(_codepoints(s1), _codepoints(s2)))


def similarity_ratio(s1: str, s2: str) -> int:
    """``100 * 2 * LCS / (len1 + len2)`` rounded half up; two empty strings score 100."""
    total = len(s1) + len(s2)
    if total == 0:
        return 100
    if not s1 or not s2:
        return 0
    # exact integer rounding, no float ties
    return (400 * lcs_length(s1, s2) + total) // (2 * total)


def _join(*parts: str) -> str:
    return " ".join(p for p in parts if p)


def _token_set_ratio(a: AbstractSet[str], b: AbstractSet[str]) -> int:
    common = " ".join(sorted(a & b))
    t1 = _join(common, " ".join(sorted(a - b)))
    t2 = _join(common, " ".join(sorted(b - a)))
    if common == t1 or common == t2:
        return 100
    return max(similarity_ratio(common, t1), similarity_ratio(common, t2), similarity_ratio(t1, t2))


def token_set_ratio(a: str, b: str) -> int:
    return _token_set_ratio(set(tokenize(a)), set(tokenize(b)))


def category_score(doc: DocumentRecord, category: SkillCategory, include_title: bool = True) -> int:
    text = doc.text if include_title else doc.body
    return _token_set_ratio(set(category.keywords), set(tokenize(text)))


@dataclass
class DfTable:
    taxonomy_name: str
    corpus_side: str
    threshold: int | None
    entries: dict[str, float]
    corpus_size: int
    levels: dict[str, str] = field(default_factory=dict)
    mode: str = "fuzzy"

    def __post_init__(self) -> None:
        if self.corpus_size < 1:
            raise ValueError("corpus_size must be >= 1")
        for cid, df in self.entries.items():
            if not 0.0 <= df <= 1.0:
                raise ValueError(f"df of {cid!r} out of [0, 1]: {df}")

    @property
    def provenance(self) -> tuple[int | None, str]:
        return self.threshold, self.mode


def support_matrix(
    corpus: Corpus | Iterable[DocumentRecord],
    categories: list[SkillCategory],
    threshold: int = DEFAULT_THRESHOLD,
    include_title: bool = True,
) -> np.ndarray:
    """Boolean (documents x categories): score strictly above ``threshold``."""
    docs = list(corpus)
    keyword_sets = [frozenset(c.keywords) for c in categories]
    out = np.zeros((len(docs), len(categories)), dtype=bool)
    for i, doc in enumerate(docs):
        tokens = set(tokenize(doc.text if include_title else doc.body))
        for j, kws in enumerate(keyword_sets):
            out[i, j] = _token_set_ratio(kws, tokens) > threshold
    return out


def document_frequency(
    corpus: Corpus,
    taxonomy: Taxonomy,
    threshold: int = DEFAULT_THRESHOLD,
    include_title: bool = True,
) -> DfTable:
    """Fraction of documents supporting each category.

    L2 support is a score strictly above ``threshold``; an L1 category is
    supported by a document that supports any of its children.
    """
    if len(corpus) == 0:
        raise ValueError("document frequency of an empty corpus is undefined")
    if not 0 <= threshold <= 100:
        raise ValueError("threshold must be within 0..100")
    leaves = list(taxonomy.leaves())
    support = support_matrix(corpus, leaves, threshold, include_title)
    column = {c.id: j for j, c in enumerate(leaves)}
    n = len(corpus)
    entries: dict[str, float] = {}
    for root in taxonomy.roots:
        cols = [column[c.id] for c in root.children]
        entries[root.id] = int(support[:, cols].any(axis=1).sum()) / n if cols else 0.0
        for c in root.children:
            entries[c.id] = int(support[:, column[c.id]].sum()) / n
    levels = {c.id: c.level for c in taxonomy.categories()}
    return DfTable(taxonomy.name, corpus.side, threshold, entries, n, levels)


__all__ = [
    "DEFAULT_THRESHOLD",
    "DfTable",
    "L1",
    "category_score",
    "document_frequency",
    "lcs_length",
    "similarity_ratio",
    "support_matrix",
    "token_set_ratio",
]
