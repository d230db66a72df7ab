"""Choosing the topic count by NPMI coherence."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from ..corpus import Corpus
from .coherence import DEFAULT_TOP_N, CoherenceReport, DocumentPresence, npmi_coherence
from .lda import DEFAULT_BETA, DEFAULT_ITERATIONS, TopicModel, train_lda
from .vocabulary import Vocabulary, build_vocabulary

log = logging.getLogger(__name__)

DEFAULT_K_MIN = 5
DEFAULT_K_MAX = 50
DEFAULT_K_STEP = 5


@dataclass
class SweepResult:
    best_k: int
    curve: dict[int, float]
    reports: dict[int, CoherenceReport] = field(default_factory=dict)
    models: dict[int, TopicModel] = field(default_factory=dict, repr=False)
    failures: dict[int, str] = field(default_factory=dict)


def select_k(
    corpus: Corpus | Sequence[Sequence[str]],
    k_min: int = DEFAULT_K_MIN,
    k_max: int = DEFAULT_K_MAX,
    step: int = DEFAULT_K_STEP,
    *,
    vocabulary: Vocabulary | None = None,
    reference: Corpus | Sequence[Sequence[str]] | None = None,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    top_n: int = DEFAULT_TOP_N,
    workers: int = 1,
    keep_models: bool = False,
) -> SweepResult:
    """Train one chain per K in ``k_min..k_max`` (inclusive, by ``step``) and keep the most coherent.

    Every chain uses the same seed.  Coherence is measured on ``reference``
    (the training corpus by default).  Ties go to the smaller K.
    """
    if k_min < 2 or k_max < k_min or step < 1:
        raise ValueError("need 2 <= k_min <= k_max and step >= 1")
    vocab = vocabulary or build_vocabulary(corpus)
    presence = DocumentPresence(reference if reference is not None else corpus)
    ks = list(range(k_min, k_max + 1, step))

    def run(k: int) -> tuple[int, TopicModel | None, CoherenceReport | None, str | None]:
        try:
            model = train_lda(corpus, vocab, k, alpha, beta, iterations, seed)
        except ValueError as exc:
            log.warning("K=%d failed: %s", k, exc)
            return k, None, None, str(exc)
        return k, model, npmi_coherence(model, presence, top_n), None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, ks))
    else:
        results = [run(k) for k in ks]

    out = SweepResult(best_k=-1, curve={})
    for k, model, report, err in results:
        if err is not None:
            out.failures[k] = err
            continue
        out.curve[k] = report.mean
        out.reports[k] = report
        if keep_models:
            out.models[k] = model
    if not out.curve:
        raise ValueError("no K in the sweep trained successfully")
    out.best_k = max(out.curve, key=lambda k: (out.curve[k], -k))
    return out
