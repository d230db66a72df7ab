"""Binary model container.

Layout: ``b"SGTM"``, uint32 format version, uint32 header length, UTF-8 JSON
header, then little-endian row-major arrays in the order listed under
``"arrays"`` in the header.  All integers are little-endian.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .lda import TopicLabel, TopicModel
from .vocabulary import Vocabulary

MAGIC = b"SGTM"
FORMAT_VERSION = 1

_ARRAYS = (
    ("n_kw", "<i8"),
    ("n_dk", "<i8"),
    ("words", "<i4"),
    ("doc_offsets", "<i8"),
    ("assignments", "<i4"),
    ("vocab_doc_freq", "<i8"),
)


class ModelFormatError(ValueError):
    pass


def _arrays(model: TopicModel) -> dict[str, np.ndarray]:
    return {
        "n_kw": model.n_kw,
        "n_dk": model.n_dk,
        "words": model.words,
        "doc_offsets": model.doc_offsets,
        "assignments": model.assignments,
        "vocab_doc_freq": model.vocabulary.doc_freq,
    }


def dumps_model(model: TopicModel) -> bytes:
    arrays = _arrays(model)
    header = {
        "K": model.n_topics,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "iterations": model.iterations,
        "vocabulary": list(model.vocabulary.words),
        "vocabulary_checksum": model.vocabulary.checksum(),
        "vocabulary_n_docs": model.vocabulary.n_docs,
        "doc_ids": list(model.doc_ids),
        "labels": [[lab.topic, lab.label, lab.annotator] for lab in model.labels],
        "arrays": [[name, dtype, list(arrays[name].shape)] for name, dtype in _ARRAYS],
    }
    head = json.dumps(header, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")
    parts = [MAGIC, struct.pack("<II", FORMAT_VERSION, len(head)), head]
    for name, dtype in _ARRAYS:
        parts.append(np.ascontiguousarray(arrays[name], dtype=dtype).tobytes())
    return b"".join(parts)


def loads_model(data: bytes) -> TopicModel:
    if data[:4] != MAGIC:
        raise ModelFormatError("not a skillgap topic model (bad magic)")
    version, head_len = struct.unpack_from("<II", data, 4)
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version}")
    pos = 12 + head_len
    header = json.loads(data[12:pos].decode("utf-8"))
    arrays: dict[str, np.ndarray] = {}
    for name, dtype, shape in header["arrays"]:
        count = int(np.prod(shape)) if shape else 1
        size = count * np.dtype(dtype).itemsize
        if pos + size > len(data):
            raise ModelFormatError(f"truncated array {name}")
        arrays[name] = np.frombuffer(data, dtype=dtype, count=count, offset=pos).reshape(shape).astype(
            np.dtype(dtype).newbyteorder("=")
        )
        pos += size
    if pos != len(data):
        raise ModelFormatError("trailing bytes after the last array")
    vocab = Vocabulary(tuple(header["vocabulary"]), arrays["vocab_doc_freq"], header["vocabulary_n_docs"])
    if vocab.checksum() != header["vocabulary_checksum"]:
        raise ModelFormatError("vocabulary checksum mismatch")
    n_kw = arrays["n_kw"]
    return TopicModel(
        n_topics=header["K"],
        alpha=header["alpha"],
        beta=header["beta"],
        vocabulary=vocab,
        n_kw=n_kw,
        n_k=n_kw.sum(axis=1),
        n_dk=arrays["n_dk"],
        words=arrays["words"],
        doc_offsets=arrays["doc_offsets"],
        assignments=arrays["assignments"],
        seed=header["seed"],
        iterations=header["iterations"],
        doc_ids=tuple(header["doc_ids"]),
        labels=tuple(TopicLabel(int(t), lab, who) for t, lab, who in header["labels"]),
    )


def save_model(model: TopicModel, path: str | Path) -> None:
    Path(path).write_bytes(dumps_model(model))


def load_model(path: str | Path) -> TopicModel:
    return loads_model(Path(path).read_bytes())
