"""LDA trained by collapsed Gibbs sampling."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .. import _kernels
from .._rng import as_seed
from ..corpus import Corpus
from .vocabulary import Vocabulary, _token_lists

log = logging.getLogger(__name__)

DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 500
DEFAULT_TOP_WORDS = 30


def default_alpha(n_topics: int) -> float:
    return 50.0 / n_topics


@dataclass(frozen=True)
class TopicLabel:
    topic: int
    label: str
    annotator: str = ""


@dataclass(frozen=True, eq=False)
class TopicModel:
    """Count state of a trained sampler plus everything needed to resume or fold in."""

    n_topics: int
    alpha: float
    beta: float
    vocabulary: Vocabulary
    n_kw: np.ndarray
    n_k: np.ndarray
    n_dk: np.ndarray
    words: np.ndarray
    doc_offsets: np.ndarray
    assignments: np.ndarray
    seed: int
    iterations: int
    doc_ids: tuple[str, ...] = ()
    labels: tuple[TopicLabel, ...] = field(default=())

    @property
    def K(self) -> int:
        return self.n_topics

    @property
    def doc_lengths(self) -> np.ndarray:
        return np.diff(self.doc_offsets)

    def phi(self) -> np.ndarray:
        V = self.n_kw.shape[1]
        return (self.n_kw + self.beta) / (self.n_k + V * self.beta)[:, None]

    def theta(self) -> np.ndarray:
        return (self.n_dk + self.alpha) / (self.doc_lengths + self.n_topics * self.alpha)[:, None]

    def label_of(self, topic: int) -> str:
        for lab in self.labels:
            if lab.topic == topic:
                return lab.label
        return f"topic-{topic}"

    def with_labels(self, labels: Sequence[TopicLabel]) -> "TopicModel":
        return replace(self, labels=tuple(labels))

    def check_invariants(self, atol: float = 1e-9) -> None:
        """Raise ``AssertionError`` if the count tables disagree with the assignments."""
        K, V = self.n_kw.shape
        if (self.n_kw < 0).any() or (self.n_dk < 0).any() or (self.n_k < 0).any():
            raise AssertionError("negative count")
        if not np.array_equal(self.n_kw.sum(axis=1), self.n_k):
            raise AssertionError("topic-word rows do not sum to topic totals")
        if not np.array_equal(self.n_dk.sum(axis=1), self.doc_lengths):
            raise AssertionError("document-topic rows do not sum to document lengths")
        expected_kw = np.zeros((K, V), dtype=np.int64)
        np.add.at(expected_kw, (self.assignments, self.words), 1)
        if not np.array_equal(expected_kw, self.n_kw):
            raise AssertionError("topic-word counts disagree with assignments")
        docs = np.repeat(np.arange(len(self.doc_lengths)), self.doc_lengths)
        expected_dk = np.zeros_like(self.n_dk)
        np.add.at(expected_dk, (docs, self.assignments), 1)
        if not np.array_equal(expected_dk, self.n_dk):
            raise AssertionError("document-topic counts disagree with assignments")
        for name, mat in (("phi", self.phi()), ("theta", self.theta())):
            if len(mat) and np.abs(mat.sum(axis=1) - 1.0).max() > atol:
                raise AssertionError(f"{name} rows do not sum to 1")


@dataclass
class _State:
    words: np.ndarray
    docs: np.ndarray
    offsets: np.ndarray
    doc_ids: tuple[str, ...]
    z: np.ndarray
    n_dk: np.ndarray
    n_kw: np.ndarray
    n_k: np.ndarray


def _encode(corpus: Corpus | Sequence[Sequence[str]], vocabulary: Vocabulary, include_title: bool):
    if isinstance(corpus, Corpus):
        ids = [f"{r.source_id}/{r.doc_id}" for r in corpus.records]
    else:
        ids = [str(i) for i in range(len(corpus))]
    encoded, kept = [], []
    for doc_id, tokens in zip(ids, _token_lists(corpus, include_title)):
        arr = vocabulary.encode(tokens)
        if arr.size == 0:
            log.warning("document %s has no in-vocabulary tokens; skipped", doc_id)
            continue
        encoded.append(arr)
        kept.append(doc_id)
    return encoded, tuple(kept)


def _initial_state(encoded, doc_ids, n_topics: int, n_words: int, seed: int) -> _State:
    lengths = np.array([len(a) for a in encoded], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    words = np.concatenate(encoded).astype(np.int32) if encoded else np.zeros(0, np.int32)
    docs = np.repeat(np.arange(len(encoded), dtype=np.int32), lengths)
    st = _State(
        words=words,
        docs=docs,
        offsets=offsets,
        doc_ids=doc_ids,
        z=np.zeros(len(words), dtype=np.int32),
        n_dk=np.zeros((len(encoded), n_topics), dtype=np.int64),
        n_kw=np.zeros((n_topics, n_words), dtype=np.int64),
        n_k=np.zeros(n_topics, dtype=np.int64),
    )
    _kernels.init_assignments(st.words, st.docs, st.z, st.n_dk, st.n_kw, st.n_k, np.uint64(seed))
    return st


def _freeze(st: _State, n_topics, alpha, beta, vocabulary, seed, iterations) -> TopicModel:
    return TopicModel(
        n_topics=n_topics,
        alpha=float(alpha),
        beta=float(beta),
        vocabulary=vocabulary,
        n_kw=st.n_kw.copy(),
        n_k=st.n_k.copy(),
        n_dk=st.n_dk.copy(),
        words=st.words.copy(),
        doc_offsets=st.offsets.copy(),
        assignments=st.z.copy(),
        seed=seed,
        iterations=iterations,
        doc_ids=st.doc_ids,
    )


def _validate(n_topics: int, alpha: float, beta: float, iterations: int) -> None:
    if n_topics < 2:
        raise ValueError("K must be >= 2")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")


def train_lda(
    corpus: Corpus | Sequence[Sequence[str]],
    vocabulary: Vocabulary,
    K: int,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    *,
    include_title: bool = True,
    check_invariants: bool = False,
    callback: Callable[[int, TopicModel], None] | None = None,
) -> TopicModel:
    """Fit LDA with ``iterations`` full Gibbs sweeps.

    The conditional for a token is proportional to
    ``(n_dk + alpha) * (n_kw + beta) / (n_k + V * beta)`` with the token's own
    assignment removed.  Identical inputs and seed give a bit-identical model
    on either kernel backend.

    ``check_invariants`` verifies the count tables after every sweep; a
    ``callback(sweep, snapshot)`` sees the same snapshots.
    """
    alpha = default_alpha(K) if alpha is None else alpha
    _validate(K, alpha, beta, iterations)
    seed = as_seed(seed)
    encoded, doc_ids = _encode(corpus, vocabulary, include_title)
    n_tokens = sum(len(a) for a in encoded)
    if K > n_tokens:
        raise ValueError(f"K={K} exceeds the number of in-vocabulary tokens ({n_tokens})")
    st = _initial_state(encoded, doc_ids, K, len(vocabulary), seed)
    N = len(st.words)
    for sweep in range(iterations):
        _kernels.gibbs_sweep(
            st.words, st.docs, st.z, st.n_dk, st.n_kw, st.n_k,
            float(alpha), float(beta), np.uint64(seed), np.uint64((sweep + 1) * N),
        )
        if check_invariants or callback is not None:
            snap = _freeze(st, K, alpha, beta, vocabulary, seed, sweep + 1)
            if check_invariants:
                snap.check_invariants()
            if callback is not None:
                callback(sweep + 1, snap)
    return _freeze(st, K, alpha, beta, vocabulary, seed, iterations)


def random_model(
    corpus: Corpus | Sequence[Sequence[str]],
    vocabulary: Vocabulary,
    K: int,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    seed: int = 0,
    include_title: bool = True,
) -> TopicModel:
    """The sampler's random initial state, as a zero-sweep baseline model."""
    alpha = default_alpha(K) if alpha is None else alpha
    encoded, doc_ids = _encode(corpus, vocabulary, include_title)
    st = _initial_state(encoded, doc_ids, K, len(vocabulary), as_seed(seed))
    return _freeze(st, K, alpha, beta, vocabulary, as_seed(seed), 0)


def top_words(model: TopicModel, k: int, n: int = DEFAULT_TOP_WORDS) -> list[str]:
    """``n`` most probable words of topic ``k``; ties go to the lexicographically smaller word."""
    if not 0 <= k < model.n_topics:
        raise IndexError(f"topic {k} out of range 0..{model.n_topics - 1}")
    if n < 1:
        raise ValueError("n must be >= 1")
    row = model.n_kw[k]
    words = model.vocabulary.words
    order = sorted(range(len(words)), key=lambda i: (-row[i], words[i]))
    return [words[i] for i in order[:n]]
