"""Attaching human topic labels from ``index<TAB>label[<TAB>annotator]`` files."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

from .lda import TopicLabel, TopicModel

log = logging.getLogger(__name__)


class LabelFileError(ValueError):
    pass


def read_labels(lines: Iterable[str], n_topics: int, annotator: str = "") -> dict[int, TopicLabel]:
    labels: dict[int, TopicLabel] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise LabelFileError(f"line {lineno}: expected index<TAB>label: {line!r}")
        try:
            idx = int(parts[0])
        except ValueError:
            raise LabelFileError(f"line {lineno}: topic index {parts[0]!r} is not an integer") from None
        if not 0 <= idx < n_topics:
            raise LabelFileError(f"line {lineno}: topic index {idx} out of range 0..{n_topics - 1}")
        if idx in labels:
            log.warning("line %d: topic %d labelled again; last label wins", lineno, idx)
        who = parts[2].strip() if len(parts) > 2 else annotator
        labels[idx] = TopicLabel(idx, parts[1].strip(), who)
    return labels


def annotate(model: TopicModel, label_file: str | Path | Iterable[str], annotator: str = "") -> TopicModel:
    """Label every topic; topics absent from the file are named ``topic-<k>``."""
    if isinstance(label_file, (str, Path)):
        with open(label_file, encoding="utf-8") as fh:
            given = read_labels(fh, model.n_topics, annotator)
    else:
        given = read_labels(label_file, model.n_topics, annotator)
    full = [given.get(k, TopicLabel(k, f"topic-{k}", "")) for k in range(model.n_topics)]
    return model.with_labels(full)
