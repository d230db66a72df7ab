"""Fold-in inference of document-topic mixtures and topic document frequencies."""
from __future__ import annotations

import logging
from typing import Iterable, Sequence

import numpy as np

from .. import _kernels
from .._rng import as_seed, derive_seed, uniforms
from ..corpus import Corpus, DocumentRecord
from .lda import TopicModel
from .vocabulary import document_tokens

log = logging.getLogger(__name__)

DEFAULT_INFER_ITERATIONS = 50
DEFAULT_THETA_THRESHOLD = 0.2
MODES = ("dominant", "threshold")


def infer_theta(
    model: TopicModel,
    tokens: Sequence[str] | DocumentRecord,
    iterations: int = DEFAULT_INFER_ITERATIONS,
    seed: int = 0,
) -> np.ndarray:
    """Topic mixture of an unseen document by Gibbs fold-in.

    Topic-word counts stay fixed at the trained values.  The returned mixture
    averages the smoothed document-topic counts over the second half of the
    sweeps.  Out-of-vocabulary tokens are ignored; a document with none left
    gets the uniform mixture.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if isinstance(tokens, DocumentRecord):
        tokens = document_tokens(tokens)
    K = model.n_topics
    words = model.vocabulary.encode(tokens)
    if words.size == 0:
        log.warning("document has no in-vocabulary tokens; returning uniform topic mixture")
        return np.full(K, 1.0 / K)
    seed = as_seed(seed)
    n = words.size
    z = np.zeros(n, dtype=np.int32)
    u = uniforms(seed, 0, n)
    z[:] = np.minimum((u * K).astype(np.int64), K - 1)
    n_dk = np.bincount(z, minlength=K).astype(np.int64)
    burn_in = iterations // 2
    acc = np.zeros(K)
    kept = 0
    for sweep in range(iterations):
        _kernels.fold_in_sweep(
            words, z, n_dk, model.n_kw, model.n_k,
            model.alpha, model.beta, np.uint64(seed), np.uint64((sweep + 1) * n),
        )
        if sweep >= burn_in:
            acc += (n_dk + model.alpha) / (n + K * model.alpha)
            kept += 1
    theta = acc / kept
    return theta / theta.sum()


def infer_corpus(
    model: TopicModel,
    corpus: Corpus | Iterable[Sequence[str]],
    iterations: int = DEFAULT_INFER_ITERATIONS,
    seed: int = 0,
) -> np.ndarray:
    """Row-stacked mixtures; document ``i`` uses the child seed ``derive_seed(seed, i)``."""
    docs = [document_tokens(r) for r in corpus] if isinstance(corpus, Corpus) else list(corpus)
    rows = [infer_theta(model, d, iterations, derive_seed(seed, i)) for i, d in enumerate(docs)]
    return np.vstack(rows) if rows else np.zeros((0, model.n_topics))


def df_from_theta(
    theta: np.ndarray, mode: str = "dominant", theta_threshold: float = DEFAULT_THETA_THRESHOLD
) -> dict[int, float]:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    n_docs, K = theta.shape
    if n_docs == 0:
        raise ValueError("topic document frequency of an empty corpus is undefined")
    if mode == "dominant":
        counts = np.bincount(np.argmax(theta, axis=1), minlength=K)
    else:
        counts = (theta >= theta_threshold).sum(axis=0)
    return {k: int(counts[k]) / n_docs for k in range(K)}


def topic_document_frequency(
    model: TopicModel,
    corpus: Corpus | Iterable[Sequence[str]],
    mode: str = "dominant",
    theta_threshold: float = DEFAULT_THETA_THRESHOLD,
    iterations: int = DEFAULT_INFER_ITERATIONS,
    seed: int = 0,
) -> dict[int, float]:
    """Share of documents assigned to each topic.

    ``dominant`` counts a document for its argmax topic only (ties go to the
    lowest index); ``threshold`` counts it for every topic whose share is at
    least ``theta_threshold``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return df_from_theta(infer_corpus(model, corpus, iterations, seed), mode, theta_threshold)
