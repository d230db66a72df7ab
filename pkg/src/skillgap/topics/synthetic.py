"""Planted-topic corpora with known topic-word structure, for recovery checks."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np


@dataclass(frozen=True)
class PlantedCorpus:
    docs: list[list[str]]
    blocks: list[frozenset[str]]
    theta: np.ndarray


def planted_corpus(
    n_topics: int = 4,
    vocab_size: int = 200,
    n_docs: int = 400,
    doc_length: int = 50,
    seed: int = 0,
    doc_concentration: float = 0.1,
    leak: float = 0.02,
) -> PlantedCorpus:
    """Each topic owns one contiguous block of the vocabulary.

    A token is drawn from its topic's block, except that with probability
    ``leak`` it is drawn uniformly from the whole vocabulary (hence blocks are
    only near-disjoint).  Document mixtures are Dirichlet(``doc_concentration``).
    """
    rng = np.random.default_rng(seed)
    width = len(str(vocab_size - 1))
    vocab = [f"w{i:0{width}d}" for i in range(vocab_size)]
    edges = np.linspace(0, vocab_size, n_topics + 1).astype(int)
    blocks = [np.arange(edges[k], edges[k + 1]) for k in range(n_topics)]
    weights = [rng.dirichlet(np.ones(len(b))) for b in blocks]
    theta = rng.dirichlet(np.full(n_topics, doc_concentration), size=n_docs)
    docs = []
    for d in range(n_docs):
        topics = rng.choice(n_topics, size=doc_length, p=theta[d])
        leaks = rng.random(doc_length) < leak
        doc = []
        for k, leaked in zip(topics, leaks):
            if leaked:
                doc.append(vocab[rng.integers(vocab_size)])
            else:
                doc.append(vocab[blocks[k][rng.choice(len(blocks[k]), p=weights[k])]])
        docs.append(doc)
    return PlantedCorpus(docs, [frozenset(vocab[i] for i in b) for b in blocks], theta)


def recovery(top: list[list[str]], blocks: list[frozenset[str]]) -> list[float]:
    """Per-planted-topic share of learned top words inside the planted block, best matching.

    With more learned topics than blocks each block is matched to one learned
    topic; the matching maximises the total overlap.
    """
    K, B = len(top), len(blocks)
    overlap = np.array([[sum(w in blk for w in t) / max(len(t), 1) for blk in blocks] for t in top])
    if K >= B and K <= 8:
        best, best_perm = -1.0, None
        for perm in permutations(range(K), B):
            score = sum(overlap[perm[b], b] for b in range(B))
            if score > best:
                best, best_perm = score, perm
        return [float(overlap[best_perm[b], b]) for b in range(B)]
    from scipy.optimize import linear_sum_assignment

    rows, cols = linear_sum_assignment(-overlap)
    out = [0.0] * B
    for r, c in zip(rows, cols):
        out[c] = float(overlap[r, c])
    return out
