"""Deterministic report files: JSON and CSV with pinned float formatting,
plus a dependency-free SVG log-log plotter.

Identical inputs must produce byte-identical files, so every float is
rendered through the same 17-significant-digit format, JSON keys are
sorted, and line endings are LF throughout.
"""

from __future__ import annotations

import math
from pathlib import Path

SCHEMA_VERSION = 1


def fmt(x) -> str:
    """Canonical float rendering: 17 significant digits, full round trip."""
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return f"{x:.17g}"
    return str(x)


def dumps_json(obj, indent: int = 0) -> str:
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int,)) and not isinstance(obj, bool):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return f'"{fmt(obj)}"'
        return fmt(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        out = out.replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, dict):
        items = []
        for k in sorted(obj):
            items.append(f'{pad}  "{k}": {dumps_json(obj[k], indent + 2)}')
        if not items:
            return "{}"
        inner = ",\n".join(items)
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [dumps_json(v, indent + 2) for v in obj]
        if not items:
            return "[]"
        if all(len(s) < 24 and "\n" not in s for s in items):
            return "[" + ", ".join(items) + "]"
        inner = ",\n".join(pad + "  " + s for s in items)
        return "[\n" + inner + "\n" + pad + "]"
    if hasattr(obj, "tolist"):
        return dumps_json(obj.tolist(), indent)
    if hasattr(obj, "item"):
        return dumps_json(obj.item(), indent)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path, obj) -> None:
    payload = {"schema": SCHEMA_VERSION, **obj}
    Path(path).write_text(dumps_json(payload) + "\n", encoding="utf-8", newline="\n")


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# SVG log-log plot
# ---------------------------------------------------------------------------

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _ticks(lo: float, hi: float):
    lo_d = math.floor(lo)
    hi_d = math.ceil(hi)
    step = max(1, (hi_d - lo_d) // 6)
    return list(range(lo_d, hi_d + 1, step))


def svg_loglog(path, series, title: str = "", xlabel: str = "", ylabel: str = "",
               annotation: str = "") -> None:
    """Log-log polyline plot of (label, xs, ys) series; pure text output."""
    pts = []
    for _, xs, ys in series:
        pts.extend((x, y) for x, y in zip(xs, ys) if x > 0 and y > 0)
    if pts:
        lx = [math.log10(x) for x, _ in pts]
        ly = [math.log10(y) for _, y in pts]
        x0, x1 = min(lx), max(lx)
        y0, y1 = min(ly), max(ly)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 - x0 < 1e-9:
        x1 = x0 + 1.0
    if y1 - y0 < 1e-9:
        y1 = y0 + 1.0

    def px(x):
        return _ML + (math.log10(x) - x0) / (x1 - x0) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (math.log10(y) - y0) / (y1 - y0) * (_H - _MT - _MB)

    colors = ["#1f6fb4", "#d1495b", "#2e8b57", "#8a5fbc", "#c88a2a"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W/2:.1f}" y="24" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{title}</text>',
    ]
    for t in _ticks(x0, x1):
        X = _ML + (t - x0) / (x1 - x0) * (_W - _ML - _MR)
        if _ML - 1 <= X <= _W - _MR + 1:
            parts.append(f'<line x1="{X:.1f}" y1="{_MT}" x2="{X:.1f}" y2="{_H-_MB}" '
                         f'stroke="#dddddd"/>')
            parts.append(f'<text x="{X:.1f}" y="{_H-_MB+18}" text-anchor="middle" '
                         f'font-size="11" font-family="sans-serif">1e{t}</text>')
    for t in _ticks(y0, y1):
        Y = _H - _MB - (t - y0) / (y1 - y0) * (_H - _MT - _MB)
        if _MT - 1 <= Y <= _H - _MB + 1:
            parts.append(f'<line x1="{_ML}" y1="{Y:.1f}" x2="{_W-_MR}" y2="{Y:.1f}" '
                         f'stroke="#dddddd"/>')
            parts.append(f'<text x="{_ML-8}" y="{Y+4:.1f}" text-anchor="end" '
                         f'font-size="11" font-family="sans-serif">1e{t}</text>')
    parts.append(f'<rect x="{_ML}" y="{_MT}" width="{_W-_ML-_MR}" height="{_H-_MT-_MB}" '
                 f'fill="none" stroke="#333333"/>')
    for i, (label, xs, ys) in enumerate(series):
        good = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
        if not good:
            continue
        color = colors[i % len(colors)]
        poly = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in good)
        parts.append(f'<polyline points="{poly}" fill="none" stroke="{color}" '
                     f'stroke-width="1.8"/>')
        parts.append(f'<text x="{_W-_MR-6}" y="{_MT+16+14*i}" text-anchor="end" '
                     f'font-size="12" font-family="sans-serif" fill="{color}">{label}</text>')
    if xlabel:
        parts.append(f'<text x="{_W/2:.1f}" y="{_H-12}" text-anchor="middle" '
                     f'font-size="12" font-family="sans-serif">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{_H/2:.1f}" font-size="12" font-family="sans-serif" '
                     f'transform="rotate(-90 16 {_H/2:.1f})" text-anchor="middle">{ylabel}</text>')
    if annotation:
        parts.append(f'<text x="{_ML+10}" y="{_MT+16}" font-size="12" '
                     f'font-family="sans-serif" fill="#444444">{annotation}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8", newline="\n")
