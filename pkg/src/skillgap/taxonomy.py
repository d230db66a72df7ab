"""Two-level skill taxonomies.

File format (UTF-8)::

    # comment
    Cryptography
      Block and stream ciphers
      Key management | kw: key management, kms

L1 lines carry no indentation, L2 lines exactly two spaces.  The optional
``| kw:`` suffix overrides the keyword list, which otherwise is the tokenised
category name.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .corpus import tokenize

L1 = "L1"
L2 = "L2"

_KW = re.compile(r"\s*\|\s*kw\s*:(.*)$")


class TaxonomyError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def slugify(name: str) -> str:
    return "-".join(tokenize(name))


@dataclass(frozen=True)
class SkillCategory:
    id: str
    name: str
    level: str
    keywords: tuple[str, ...]
    children: tuple["SkillCategory", ...] = ()

    def __post_init__(self) -> None:
        if self.level not in (L1, L2):
            raise TaxonomyError(f"bad level {self.level!r}")
        if not self.keywords:
            raise TaxonomyError(f"category {self.name!r} has no keywords")
        if self.level == L2 and self.children:
            raise TaxonomyError(f"L2 category {self.name!r} cannot have children")


@dataclass(frozen=True)
class Taxonomy:
    name: str
    roots: tuple[SkillCategory, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for cat in self.categories():
            if cat.id in seen:
                raise TaxonomyError(f"duplicate category id {cat.id!r}")
            seen.add(cat.id)

    def categories(self) -> Iterator[SkillCategory]:
        """All categories, each L1 followed by its children."""
        for root in self.roots:
            yield root
            yield from root.children

    def leaves(self) -> Iterator[SkillCategory]:
        for root in self.roots:
            yield from root.children

    def get(self, category_id: str) -> SkillCategory:
        for cat in self.categories():
            if cat.id == category_id:
                return cat
        raise KeyError(category_id)

    @property
    def labels(self) -> dict[str, str]:
        return {c.id: c.name for c in self.categories()}

    @property
    def levels(self) -> dict[str, str]:
        return {c.id: c.level for c in self.categories()}


def _split_keywords(text: str) -> tuple[str, ...]:
    out: list[str] = []
    for part in text.split(","):
        out.extend(tokenize(part))
    return tuple(out)


def parse_taxonomy_lines(lines: Iterable[str], name: str, drop_stopwords: bool = False) -> Taxonomy:
    from .topics.vocabulary import stopwords as _stopwords

    stop = _stopwords("en") if drop_stopwords else frozenset()
    roots: list[tuple[SkillCategory, list[SkillCategory]]] = []
    seen: set[str] = set()

    def make(text: str, level: str, parent: str | None, lineno: int) -> SkillCategory:
        override = None
        m = _KW.search(text)
        if m:
            override = _split_keywords(m.group(1))
            text = text[: m.start()]
        cat_name = text.strip()
        if not cat_name:
            raise TaxonomyError("empty category name", lineno)
        slug = slugify(cat_name)
        if not slug:
            raise TaxonomyError(f"category name {cat_name!r} has no letters or digits", lineno)
        cid = slug if parent is None else f"{parent}/{slug}"
        if cid in seen:
            raise TaxonomyError(f"duplicate category id {cid!r}", lineno)
        seen.add(cid)
        keywords = override if override is not None else tuple(tokenize(cat_name))
        if stop:
            keywords = tuple(k for k in keywords if k not in stop) or keywords
        if not keywords:
            raise TaxonomyError(f"category {cat_name!r} has no keywords", lineno)
        return SkillCategory(cid, cat_name, level, keywords)

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" in line[: len(line) - len(line.lstrip())]:
            raise TaxonomyError("tabs are not allowed in indentation", lineno)
        indent = len(line) - len(line.lstrip(" "))
        if indent == 0:
            roots.append((make(line, L1, None, lineno), []))
        elif indent == 2:
            if not roots:
                raise TaxonomyError("L2 category before any L1 category", lineno)
            parent, children = roots[-1]
            children.append(make(line, L2, parent.id, lineno))
        elif indent % 2 == 0:
            raise TaxonomyError("taxonomy depth exceeds 2 levels", lineno)
        else:
            raise TaxonomyError(f"indentation of {indent} spaces is not a multiple of two", lineno)

    built = tuple(
        SkillCategory(p.id, p.name, p.level, p.keywords, tuple(children)) for p, children in roots
    )
    return Taxonomy(name, built)


def parse_taxonomy(path: str | Path, name: str | None = None, drop_stopwords: bool = False) -> Taxonomy:
    path = Path(path)
    tax_name = name or path.name.split(".")[0]
    with path.open(encoding="utf-8") as fh:
        return parse_taxonomy_lines(fh, tax_name, drop_stopwords)


def builtin_taxonomy(name: str) -> Taxonomy:
    """Load one of the shipped taxonomies (``acm-ccs`` or ``eu-cst``)."""
    ref = resources.files("skillgap") / "data" / f"{name}.tax"
    with ref.open(encoding="utf-8") as fh:
        return parse_taxonomy_lines(fh, name)


def serialize_taxonomy(taxonomy: Taxonomy) -> str:
    out: list[str] = []

    def line(cat: SkillCategory, indent: str) -> str:
        if tuple(tokenize(cat.name)) == cat.keywords:
            return f"{indent}{cat.name}"
        return f"{indent}{cat.name} | kw: {', '.join(cat.keywords)}"

    for root in taxonomy.roots:
        out.append(line(root, ""))
        out.extend(line(child, "  ") for child in root.children)
    return "\n".join(out) + ("\n" if out else "")


def validate(taxonomy: Taxonomy, stopword_list: Sequence[str] | None = None) -> list[str]:
    """Warnings about categories that will match poorly.  Never raises."""
    from .topics.vocabulary import stopwords as _stopwords

    stop = frozenset(stopword_list) if stopword_list is not None else _stopwords("en")
    warnings: list[str] = []
    for root in taxonomy.roots:
        if not root.children:
            warnings.append(f"{root.id}: L1 category has no children (its df is always 0)")
    matchable = list(taxonomy.leaves())
    for cat in taxonomy.categories():
        if all(k in stop for k in cat.keywords):
            warnings.append(f"{cat.id}: keyword set consists of stopwords only")
    sets = [(c.id, frozenset(c.keywords)) for c in matchable]
    for i, (a_id, a) in enumerate(sets):
        for j, (b_id, b) in enumerate(sets):
            if i == j:
                continue
            if a == b:
                if i < j:
                    warnings.append(f"{a_id}: keyword set identical to {b_id}")
            elif a < b:
                warnings.append(f"{a_id}: keyword set is a subset of {b_id} (shadowed match)")
    return warnings
