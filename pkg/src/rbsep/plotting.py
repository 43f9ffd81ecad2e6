"""Matplotlib rendering of instances, solutions and benchmark tables.

Output is byte-stable: the SVG hash salt is fixed and no date is embedded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .geometry import Instance, Line, Point  # noqa: E402

RED = "#c0392b"
BLUE = "#2c6fbb"
LINE = "#333333"
MARGIN = Fraction(1, 20)

_RC = {
    "svg.hashsalt": "rbsep",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

Viewport = Tuple[Fraction, Fraction, Fraction, Fraction]


def viewport(instance: Instance) -> Viewport:
    """Bounding box of all points grown by 5% per side (unit box if flat)."""
    pts = list(instance.red) + list(instance.blue)
    if not pts:
        return Fraction(-1), Fraction(-1), Fraction(1), Fraction(1)
    x0, x1 = min(p.x for p in pts), max(p.x for p in pts)
    y0, y1 = min(p.y for p in pts), max(p.y for p in pts)
    w = x1 - x0 if x1 > x0 else Fraction(1)
    h = y1 - y0 if y1 > y0 else Fraction(1)
    return x0 - MARGIN * w, y0 - MARGIN * h, x1 + MARGIN * w, y1 + MARGIN * h


def clip_line(line: Line, box: Viewport) -> Optional[Tuple[Point, Point]]:
    """Segment of the line inside the box, or None if it misses the box."""
    x0, y0, x1, y1 = box
    hits: List[Point] = []
    if line.b != 0:
        for x in (x0, x1):
            y = (line.c - line.a * x) / line.b
            if y0 <= y <= y1:
                hits.append(Point(x, y))
    if line.a != 0:
        for y in (y0, y1):
            x = (line.c - line.b * y) / line.a
            if x0 <= x <= x1:
                hits.append(Point(x, y))
    hits = sorted(set(hits))
    if len(hits) < 2:
        return None
    return hits[0], hits[-1]


def plot_instance(
    instance: Instance,
    lines: Sequence[Line] = (),
    out_path: str = "instance.svg",
    title: Optional[str] = None,
) -> None:
    box = viewport(instance)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        for seg in filter(None, (clip_line(l, box) for l in lines)):
            (p, q) = seg
            ax.plot([float(p.x), float(q.x)], [float(p.y), float(q.y)], color=LINE, lw=0.8, zorder=1)
        for pts, colour, label in ((instance.red, RED, "red"), (instance.blue, BLUE, "blue")):
            if pts:
                ax.scatter([float(p.x) for p in pts], [float(p.y) for p in pts], s=18, c=colour, label=label, zorder=2)
        ax.set_xlim(float(box[0]), float(box[2]))
        ax.set_ylim(float(box[1]), float(box[3]))
        ax.set_aspect("equal", adjustable="box")
        if title:
            ax.set_title(title)
        if instance.red or instance.blue:
            ax.legend(loc="upper right", frameon=False)
        fig.savefig(out_path, metadata={"Date": None})
        plt.close(fig)


def _numeric(v) -> bool:
    try:
        float(v)
    except (TypeError, ValueError):
        return False
    return True


def plot_bench(rows: Sequence[dict], out_path: str, value: str = "wall_ms") -> None:
    """Grouped bars, one group per instance and one bar per method."""
    instances = list(dict.fromkeys(r["instance"] for r in rows))
    methods = list(dict.fromkeys(r["method"] for r in rows))
    width = 0.8 / max(1, len(methods))
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(instances) + 2), 3.5))
        for mi, m in enumerate(methods):
            xs, ys = [], []
            for ii, name in enumerate(instances):
                for r in rows:
                    if r["instance"] == name and r["method"] == m and _numeric(r.get(value)):
                        xs.append(ii + mi * width)
                        ys.append(float(r[value]))
            ax.bar(xs, ys, width=width, label=m)
        ax.set_xticks([i + 0.4 - width / 2 for i in range(len(instances))])
        ax.set_xticklabels(instances, rotation=45, ha="right")
        ax.set_ylabel(value)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(out_path, metadata={"Date": None})
        plt.close(fig)
