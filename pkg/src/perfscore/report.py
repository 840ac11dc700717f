"""Serialising importance reports: JSON (canonical), CSV and an SVG bar chart."""

import csv
import io
import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLUMNS = ("name", "perf", "vi", "b_j", "selected", "rank")


def format_float(x):
    """17 significant digits, enough to round-trip any double; non-finite -> None."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return format(x, ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        s = format_float(obj)
        return "null" if s is None else s
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level + 1)}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text with every float written at 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def variable_rows(report):
    """One dict per variable, in column order; ``vi`` omitted when not computed."""
    rows = []
    rank = report.rank
    selected = report.selected
    for j, name in enumerate(report.names):
        row = {"name": name, "perf": float(report.perf[j])}
        if report.vi is not None:
            row["vi"] = float(report.vi[j])
        row.update(b_j=int(report.b_j[j]), selected=bool(selected[j]), rank=int(rank[j]))
        rows.append(row)
    return rows


def report_document(report, manifest=None, avte=None):
    doc = {"variables": variable_rows(report), "config": report.config or {}}
    if avte is not None:
        doc["avte"] = avte
    if manifest is not None:
        doc["manifest"] = manifest
    return doc


def write_json(doc, path):
    Path(path).write_text(dumps(doc), encoding="utf-8")


def to_csv(report):
    buf = io.StringIO()
    cols = [c for c in COLUMNS if c != "vi" or report.vi is not None]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in variable_rows(report):
        out = []
        for c in cols:
            v = row[c]
            if isinstance(v, bool):
                out.append("true" if v else "false")
            elif isinstance(v, float):
                out.append(format_float(v) or "")
            else:
                out.append(v)
        w.writerow(out)
    return buf.getvalue()


def render_svg(report, metric="perf", title=None):
    """Horizontal bar chart of one score, sorted descending, with a zero line.

    Bars of selected variables (PERF > 0) are drawn dark, discarded ones grey.
    Variables never included in a member are listed without a bar.
    """
    values = report.perf if metric == "perf" else report.vi
    if values is None:
        raise ValueError(f"report has no {metric} scores")
    values = np.asarray(values, dtype=np.float64)
    p = len(values)
    order = sorted(range(p), key=lambda j: (not np.isfinite(values[j]),
                                            -values[j] if np.isfinite(values[j]) else 0.0, j))
    selected = report.selected

    width, row_h = 800, 24
    top, bottom, left, right = 48, 36, 120, 90
    height = row_h * p + top + bottom
    finite = values[np.isfinite(values)]
    lo = min(0.0, float(finite.min())) if len(finite) else 0.0
    hi = max(0.0, float(finite.max())) if len(finite) else 1.0
    if hi == lo:
        hi = lo + 1.0
    plot_w = width - left - right
    sx = lambda v: left + (v - lo) / (hi - lo) * plot_w  # noqa: E731
    x0 = sx(0.0)

    label = title or {"perf": "PERF score", "vi": "Permutation VI"}.get(metric, metric)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{escape(label)}</text>',
    ]
    for i, j in enumerate(order):
        y = top + i * row_h
        v = values[j]
        out.append(f'<text x="{left - 8}" y="{y + 16}" text-anchor="end">'
                   f'{escape(report.names[j])}</text>')
        if not np.isfinite(v):
            out.append(f'<text x="{x0 + 6:.1f}" y="{y + 16}" fill="#888">never drawn</text>')
            continue
        x1 = sx(v)
        fill = "#1f5fa8" if selected[j] else "#b0b7c0"
        out.append(f'<rect x="{min(x0, x1):.2f}" y="{y + 4}" width="{abs(x1 - x0):.2f}" '
                   f'height="{row_h - 8}" fill="{fill}"/>')
        out.append(f'<text x="{width - right + 6}" y="{y + 16}">{v:.4g}</text>')
    out.append(f'<line x1="{x0:.2f}" y1="{top - 4}" x2="{x0:.2f}" y2="{top + row_h * p + 4}" '
               f'stroke="black" stroke-width="1"/>')
    out.append(f'<text x="{x0:.2f}" y="{height - 12}" text-anchor="middle">0</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
