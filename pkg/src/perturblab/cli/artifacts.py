"""Deterministic artifact writers: canonical JSON and CSV, plain SVG scenes.

Every writer goes through an atomic rename so a crashed run never leaves a
torn file, and nothing here embeds timestamps or hostnames; rerunning an
experiment with the same config must reproduce every byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FORMATS = ("csv", "json", "svg")

SVG_WIDTH = 800
SVG_HEIGHT = 600
POINT_RADIUS = 0.6

# matplotlib's old tab10 order, familiar enough to read without a legend
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2")


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def json_safe(value):
    """Recursively convert numpy scalars/arrays and complex numbers."""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_safe(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def json_text(payload) -> str:
    return json.dumps(json_safe(payload), indent=2, sort_keys=True,
                      allow_nan=False) + "\n"


def write_json(path: str | Path, payload) -> None:
    atomic_write_text(path, json_text(payload))


def _cell(value):
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path: str | Path, header: Sequence[str],
              rows: Iterable[Sequence]) -> None:
    atomic_write_text(path, csv_text(header, rows))


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class SvgCanvas:
    """Fixed 800x600 scene assembled from primitive shapes."""

    def __init__(self, background: str = "#ffffff"):
        self.elements: list[str] = [
            f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
            f'fill="{background}"/>']

    def point(self, x: float, y: float, color: str = PALETTE[0],
              radius: float = POINT_RADIUS) -> None:
        self.elements.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{radius:g}" fill="{color}"/>')

    def polyline(self, pts: Iterable[tuple[float, float]],
                 color: str = "#444444", width: float = 1.0,
                 dashed: bool = False) -> None:
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.elements.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width:g}"{dash}/>')

    def text(self, x: float, y: float, s: str, size: int = 13,
             color: str = "#222222", anchor: str = "start") -> None:
        self.elements.append(
            f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" '
            f'font-family="sans-serif" fill="{color}" '
            f'text-anchor="{anchor}">{_esc(s)}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" '
                f'width="{SVG_WIDTH}" height="{SVG_HEIGHT}">')
        return head + "\n" + "\n".join(self.elements) + "\n</svg>\n"


def write_svg(path: str | Path, canvas: SvgCanvas) -> None:
    atomic_write_text(path, canvas.render())


class DataWindow:
    """Affine map from data coordinates into the fixed SVG frame."""

    def __init__(self, x_range: tuple[float, float],
                 y_range: tuple[float, float], margin: float = 46.0):
        self.x0, self.x1 = float(x_range[0]), float(x_range[1])
        self.y0, self.y1 = float(y_range[0]), float(y_range[1])
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("data window must have positive extent")
        self.margin = margin
        self.sx = (SVG_WIDTH - 2 * margin) / (self.x1 - self.x0)
        self.sy = (SVG_HEIGHT - 2 * margin) / (self.y1 - self.y0)

    @classmethod
    def around(cls, xs, ys, pad: float = 0.05) -> "DataWindow":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        dx = max(float(xs.max() - xs.min()), 1e-12)
        dy = max(float(ys.max() - ys.min()), 1e-12)
        return cls((float(xs.min()) - pad * dx, float(xs.max()) + pad * dx),
                   (float(ys.min()) - pad * dy, float(ys.max()) + pad * dy))

    def xy(self, x: float, y: float) -> tuple[float, float]:
        return (self.margin + (float(x) - self.x0) * self.sx,
                SVG_HEIGHT - self.margin - (float(y) - self.y0) * self.sy)

    def frame(self, canvas: SvgCanvas, title: str = "",
              x_label: str = "", y_label: str = "") -> None:
        m = self.margin
        corners = [(m, m), (SVG_WIDTH - m, m),
                   (SVG_WIDTH - m, SVG_HEIGHT - m), (m, SVG_HEIGHT - m),
                   (m, m)]
        canvas.polyline(corners, color="#888888", width=1.0)
        if title:
            canvas.text(SVG_WIDTH / 2, m - 14, title, size=15, anchor="middle")
        if x_label:
            canvas.text(SVG_WIDTH / 2, SVG_HEIGHT - m + 30, x_label,
                        anchor="middle")
        if y_label:
            canvas.text(m - 34, SVG_HEIGHT / 2, y_label, anchor="middle")
        canvas.text(m, SVG_HEIGHT - m + 16, f"{self.x0:.4g}", size=11)
        canvas.text(SVG_WIDTH - m, SVG_HEIGHT - m + 16, f"{self.x1:.4g}",
                    size=11, anchor="end")
        canvas.text(m - 6, SVG_HEIGHT - m, f"{self.y0:.4g}", size=11,
                    anchor="end")
        canvas.text(m - 6, m + 4, f"{self.y1:.4g}", size=11, anchor="end")
