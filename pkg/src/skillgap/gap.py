"""Skill gaps: demand document frequency minus supply document frequency."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

from .match import DfTable

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GapEntry:
    skill_id: str
    df_demand: float
    df_supply: float
    label: str = ""

    @property
    def gap(self) -> float:
        return self.df_demand - self.df_supply


@dataclass(frozen=True)
class PriorityPoint:
    skill_id: str
    x: float
    y: float
    label: str = ""

    @property
    def on_diagonal(self) -> bool:
        return self.x == self.y


class GapError(ValueError):
    pass


def compute_gaps(
    demand: DfTable,
    supply: DfTable,
    labels: Mapping[str, str] | None = None,
) -> list[GapEntry]:
    """One entry per skill id known on either side, sorted by gap descending.

    A skill missing on one side counts as df 0 there (with a warning).  Tables
    with no skill id in common, or built under different thresholds or modes,
    are refused.
    """
    if demand.provenance != supply.provenance:
        raise GapError(f"tables built differently: demand {demand.provenance}, supply {supply.provenance}")
    d, s = demand.entries, supply.entries
    if d and s and not (d.keys() & s.keys()):
        raise GapError("demand and supply tables share no skill id (mismatched taxonomies?)")
    labels = labels or {}
    entries = []
    for sid in sorted(d.keys() | s.keys()):
        if sid not in d or sid not in s:
            log.warning("skill %s missing from the %s table; treating its df as 0",
                        sid, "demand" if sid not in d else "supply")
        entries.append(GapEntry(sid, d.get(sid, 0.0), s.get(sid, 0.0), labels.get(sid, "")))
    entries.sort(key=lambda e: (-e.gap, e.skill_id))
    return entries


def prioritize(entries: Iterable[GapEntry], min_gap: float = 0.0) -> list[PriorityPoint]:
    """Map entries to (demand, gap) points, ordered by demand then gap, both descending.

    ``min_gap`` hides points whose absolute gap is below it.
    """
    points = [
        PriorityPoint(e.skill_id, e.df_demand, e.gap, e.label)
        for e in entries
        if abs(e.gap) >= min_gap
    ]
    points.sort(key=lambda p: (-p.x, -p.y, p.skill_id))
    return points


@dataclass(frozen=True)
class GapReport:
    entries: tuple[GapEntry, ...] = ()

    def points(self, min_gap: float = 0.0) -> list[PriorityPoint]:
        return prioritize(self.entries, min_gap)
