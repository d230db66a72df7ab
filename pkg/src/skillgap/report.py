"""Deterministic CSV, SVG and JSON emitters.

Numbers in CSV files always carry four decimals, chart coordinates two.
Output for identical input is byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

from .gap import GapEntry, GapReport, PriorityPoint
from .match import DfTable
from .topics.coherence import CoherenceReport

CHART_FORMATS = ("svg", "json")


def fmt(value: float, places: int = 4) -> str:
    out = f"{value:.{places}f}"
    if out.startswith("-") and float(out) == 0.0:
        out = out[1:]
    return out


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]], comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def df_table_csv(table: DfTable) -> str:
    comments = [
        f"taxonomy={table.taxonomy_name}",
        f"side={table.corpus_side}",
        f"threshold={'none' if table.threshold is None else table.threshold}",
        f"mode={table.mode}",
        f"corpus_size={table.corpus_size}",
    ]
    rows = [[cid, table.levels.get(cid, ""), fmt(df)] for cid, df in table.entries.items()]
    return _csv_text(["category_id", "level", "df"], rows, comments)


def gaps_csv(report: GapReport) -> str:
    rows = [[e.skill_id, e.label, fmt(e.df_demand), fmt(e.df_supply), fmt(e.gap)] for e in report.entries]
    return _csv_text(["skill_id", "label", "df_demand", "df_supply", "gap"], rows)


def priority_csv(points: Sequence[PriorityPoint]) -> str:
    return _csv_text(["skill_id", "x", "y"], [[p.skill_id, fmt(p.x), fmt(p.y)] for p in points])


def coherence_csv(report: CoherenceReport) -> str:
    labels = report.labels or tuple(f"topic-{k}" for k in range(len(report.per_topic)))
    rows = [[str(k), fmt(s), labels[k]] for k, s in enumerate(report.per_topic)]
    return _csv_text(["topic", "npmi", "label"], rows)


def emit_csv(artifact, path: str | Path) -> Path:
    """Write a DfTable, GapReport, CoherenceReport or priority point list as CSV."""
    if isinstance(artifact, DfTable):
        text = df_table_csv(artifact)
    elif isinstance(artifact, GapReport):
        text = gaps_csv(artifact)
    elif isinstance(artifact, CoherenceReport):
        text = coherence_csv(artifact)
    elif isinstance(artifact, (list, tuple)) and all(isinstance(p, PriorityPoint) for p in artifact):
        text = priority_csv(artifact)
    else:
        raise TypeError(f"cannot emit {type(artifact).__name__} as CSV")
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _data_lines(path: Path) -> tuple[dict[str, str], list[dict[str, str]]]:
    meta: dict[str, str] = {}
    body: list[str] = []
    with path.open(encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value.strip()
            else:
                body.append(line)
    return meta, list(csv.DictReader(body))


def read_df_table(path: str | Path) -> DfTable:
    path = Path(path)
    meta, rows = _data_lines(path)
    try:
        threshold = None if meta.get("threshold", "none") == "none" else int(meta["threshold"])
        return DfTable(
            taxonomy_name=meta.get("taxonomy", ""),
            corpus_side=meta.get("side", ""),
            threshold=threshold,
            entries={r["category_id"]: float(r["df"]) for r in rows},
            corpus_size=int(meta["corpus_size"]),
            levels={r["category_id"]: r["level"] for r in rows},
            mode=meta.get("mode", "fuzzy"),
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: not a df table ({exc})") from exc


def read_gaps(path: str | Path) -> GapReport:
    path = Path(path)
    _, rows = _data_lines(path)
    try:
        entries = tuple(
            GapEntry(r["skill_id"], float(r["df_demand"]), float(r["df_supply"]), r["label"]) for r in rows
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: not a gap table ({exc})") from exc
    return GapReport(entries)


# --------------------------------------------------------------------------
# charts

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 70, 30, 40, 60


def _ceil1(v: float) -> float:
    return max(0.1, math.ceil(round(v * 10, 6)) / 10)


def _ticks(lo: float, hi: float) -> list[float]:
    step = 0.1 if hi - lo <= 1.0 else 0.2
    n = int(round((hi - lo) / step))
    return [round(lo + i * step, 6) for i in range(n + 1)]


def priority_axes(points: Sequence[PriorityPoint]) -> tuple[float, float, float]:
    x_hi = _ceil1(max((p.x for p in points), default=0.0))
    y_lo = -_ceil1(max((-p.y for p in points), default=0.0))
    return x_hi, y_lo, x_hi


def _svg_head(title: str, width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]


def priority_svg(points: Sequence[PriorityPoint], title: str = "Skill gap prioritization") -> str:
    x_hi, y_lo, y_hi = priority_axes(points)
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def sx(x: float) -> str:
        return fmt(_ML + x / x_hi * pw, 2)

    def sy(y: float) -> str:
        return fmt(_MT + (y_hi - y) / (y_hi - y_lo) * ph, 2)

    out = _svg_head(title, _W, _H)
    out.append(f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append('<g class="grid" stroke="#dddddd" stroke-width="1">')
    for t in _ticks(0.0, x_hi):
        out.append(f'<line x1="{sx(t)}" y1="{sy(y_lo)}" x2="{sx(t)}" y2="{sy(y_hi)}"/>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{sx(0)}" y1="{sy(t)}" x2="{sx(x_hi)}" y2="{sy(t)}"/>')
    out.append("</g>")
    out.append('<g class="ticks" fill="#333333">')
    for t in _ticks(0.0, x_hi):
        out.append(f'<text x="{sx(t)}" y="{fmt(float(sy(y_lo)) + 16, 2)}" text-anchor="middle">{fmt(t, 1)}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<text x="{_ML - 8}" y="{fmt(float(sy(t)) + 4, 2)}" text-anchor="end">{fmt(t, 1)}</text>')
    out.append("</g>")
    out.append(
        f'<line class="x-axis" x1="{sx(0)}" y1="{sy(0)}" x2="{sx(x_hi)}" y2="{sy(0)}" stroke="#000000" stroke-width="1.5"/>'
    )
    out.append(
        f'<line class="y-axis" x1="{sx(0)}" y1="{sy(y_lo)}" x2="{sx(0)}" y2="{sy(y_hi)}" stroke="#000000" stroke-width="1.5"/>'
    )
    out.append(
        f'<line class="zero-supply" x1="{sx(0)}" y1="{sy(0)}" x2="{sx(x_hi)}" y2="{sy(x_hi)}" '
        'stroke="#c0392b" stroke-width="1" stroke-dasharray="6 4"/>'
    )
    out.append(
        f'<text x="{_ML + pw // 2}" y="{_H - 15}" text-anchor="middle">industrial demand (share of job ads)</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + ph // 2}" text-anchor="middle" transform="rotate(-90 18 {_MT + ph // 2})">'
        "skill gap (demand share minus supply share)</text>"
    )
    out.append('<g class="points">')
    for p in points:
        name = p.label or p.skill_id
        out.append(
            f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="4" fill="#2c7fb8" data-skill={quoteattr(p.skill_id)}>'
            f"<title>{escape(name)}: demand {fmt(p.x)}, gap {fmt(p.y)}</title></circle>"
        )
        out.append(f'<text x="{fmt(float(sx(p.x)) + 6, 2)}" y="{fmt(float(sy(p.y)) - 6, 2)}">{escape(name)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bars_svg(entries: Sequence[GapEntry], title: str = "Document frequency per skill") -> str:
    n = len(entries)
    group = 44
    width = max(_W, _ML + _MR + n * group)
    height = _H + 100
    mb = _MB + 100
    pw, ph = width - _ML - _MR, height - _MT - mb
    top = _ceil1(max([e.df_demand for e in entries] + [e.df_supply for e in entries], default=0.0))

    def sy(v: float) -> str:
        return fmt(_MT + (top - v) / top * ph, 2)

    out = _svg_head(title, width, height)
    out.append(f'<text x="{width // 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append('<g class="ticks" fill="#333333">')
    for t in _ticks(0.0, top):
        out.append(f'<line x1="{_ML}" y1="{sy(t)}" x2="{_ML + pw}" y2="{sy(t)}" stroke="#dddddd"/>')
        out.append(f'<text x="{_ML - 8}" y="{fmt(float(sy(t)) + 4, 2)}" text-anchor="end">{fmt(t * 100, 0)}%</text>')
    out.append("</g>")
    out.append(f'<line class="x-axis" x1="{_ML}" y1="{sy(0)}" x2="{_ML + pw}" y2="{sy(0)}" stroke="#000000"/>')
    out.append('<g class="bars">')
    base = float(sy(0))
    for i, e in enumerate(entries):
        x0 = _ML + i * group + 6
        name = e.label or e.skill_id
        for j, (value, colour, side) in enumerate(((e.df_demand, "#2c7fb8", "demand"), (e.df_supply, "#fdae61", "supply"))):
            y = float(sy(value))
            out.append(
                f'<rect class="{side}" x="{fmt(x0 + j * 16, 2)}" y="{fmt(y, 2)}" width="16" '
                f'height="{fmt(base - y, 2)}" fill="{colour}" data-skill={quoteattr(e.skill_id)}>'
                f"<title>{escape(name)} {side}: {fmt(value)}</title></rect>"
            )
        lx = fmt(x0 + 16, 2)
        ly = fmt(base + 12, 2)
        out.append(
            f'<text x="{lx}" y="{ly}" text-anchor="end" transform="rotate(-45 {lx} {ly})">{escape(name)}</text>'
        )
    out.append("</g>")
    lx = _ML + pw - 150
    out.append(f'<rect x="{lx}" y="{_MT}" width="12" height="12" fill="#2c7fb8"/>')
    out.append(f'<text x="{lx + 18}" y="{_MT + 10}">demand (job ads)</text>')
    out.append(f'<rect x="{lx}" y="{_MT + 18}" width="12" height="12" fill="#fdae61"/>')
    out.append(f'<text x="{lx + 18}" y="{_MT + 28}">supply (curricula)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def chart_json(data: Sequence[PriorityPoint] | Sequence[GapEntry], kind: str) -> str:
    if kind == "priority":
        x_hi, y_lo, y_hi = priority_axes(data)
        payload = {
            "kind": "priority",
            "axes": {"x": [0.0, x_hi], "y": [y_lo, y_hi]},
            "diagonal": [[0.0, 0.0], [x_hi, x_hi]],
            "points": [{"skill_id": p.skill_id, "label": p.label, "x": p.x, "y": p.y} for p in data],
        }
    else:
        payload = {
            "kind": "bars",
            "bars": [
                {"skill_id": e.skill_id, "label": e.label, "demand": e.df_demand, "supply": e.df_supply}
                for e in data
            ],
        }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def read_chart_json(path: str | Path) -> list[PriorityPoint] | list[GapEntry]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data["kind"] == "priority":
        return [PriorityPoint(p["skill_id"], p["x"], p["y"], p["label"]) for p in data["points"]]
    return [GapEntry(b["skill_id"], b["demand"], b["supply"], b["label"]) for b in data["bars"]]


def emit_chart(
    data: Sequence[PriorityPoint] | Sequence[GapEntry],
    path: str | Path,
    format: str | None = None,
    kind: str | None = None,
    title: str | None = None,
) -> Path:
    """Write a prioritization scatter (points) or grouped bar chart (gap entries)."""
    path = Path(path)
    fmt_ = format or path.suffix.lstrip(".").lower()
    if fmt_ not in CHART_FORMATS:
        raise ValueError(f"unknown chart format {fmt_!r}; expected one of {CHART_FORMATS}")
    data = list(data)
    if kind is None:
        kind = "bars" if data and isinstance(data[0], GapEntry) else "priority"
    if kind == "priority" and data and isinstance(data[0], GapEntry):
        from .gap import prioritize

        data = prioritize(data)
    if kind not in ("priority", "bars"):
        raise ValueError(f"unknown chart kind {kind!r}")
    if fmt_ == "json":
        text = chart_json(data, kind)
    elif kind == "priority":
        text = priority_svg(data, title or "Skill gap prioritization")
    else:
        text = bars_svg(data, title or "Document frequency per skill")
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
