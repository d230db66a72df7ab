"""Skill-gap analysis between job-ad (demand) and curriculum (supply) corpora."""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    CorpusSummary,
    DocumentRecord,
    dedup,
    filter_relevant,
    ingest_records,
    normalize,
    read_corpus,
    summarize,
    tokenize,
    write_corpus,
)
from .gap import GapEntry, GapReport, PriorityPoint, compute_gaps, prioritize
from .match import DfTable, category_score, document_frequency, similarity_ratio, token_set_ratio
from .taxonomy import SkillCategory, Taxonomy, builtin_taxonomy, parse_taxonomy, validate

__all__ = [
    "Corpus",
    "CorpusSummary",
    "DfTable",
    "DocumentRecord",
    "GapEntry",
    "GapReport",
    "PriorityPoint",
    "SkillCategory",
    "Taxonomy",
    "builtin_taxonomy",
    "category_score",
    "compute_gaps",
    "dedup",
    "document_frequency",
    "filter_relevant",
    "ingest_records",
    "normalize",
    "parse_taxonomy",
    "prioritize",
    "read_corpus",
    "similarity_ratio",
    "summarize",
    "token_set_ratio",
    "tokenize",
    "validate",
    "write_corpus",
]
