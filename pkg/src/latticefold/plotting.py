"""Minimal SVG box plots; no plotting library needed."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .optimizer import ExperimentStats

WIDTH_PER_BOX = 70
HEIGHT = 320
MARGIN = 50


def box_plot_svg(
    labels: Sequence[str], stats: Sequence[ExperimentStats], title: str = ""
) -> str:
    """Whiskers at min/max, box from Q1 to Q3, bar at the median. Y axis is [0, 1]."""
    if len(labels) != len(stats):
        raise ValueError("one label per stats block")
    width = MARGIN * 2 + WIDTH_PER_BOX * max(len(stats), 1)
    plot_h = HEIGHT - 2 * MARGIN

    def y(v: float) -> float:
        return MARGIN + plot_h * (1.0 - min(max(v, 0.0), 1.0))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{HEIGHT}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="13">'
        f"{escape(title)}</text>",
        f'<line x1="{MARGIN}" y1="{y(0):.1f}" x2="{MARGIN}" y2="{y(1):.1f}" stroke="black"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        parts.append(
            f'<line x1="{MARGIN - 4}" y1="{y(tick):.1f}" x2="{width - MARGIN}" y2="{y(tick):.1f}" '
            f'stroke="#ddd"/>'
            f'<text x="{MARGIN - 6}" y="{y(tick) + 4:.1f}" text-anchor="end">{tick:g}</text>'
        )
    for i, (label, s) in enumerate(zip(labels, stats)):
        cx = MARGIN + WIDTH_PER_BOX * (i + 0.5)
        half = WIDTH_PER_BOX * 0.3
        parts += [
            f'<line x1="{cx:.1f}" y1="{y(s.min):.1f}" x2="{cx:.1f}" y2="{y(s.max):.1f}" stroke="black"/>',
            f'<line x1="{cx - half / 2:.1f}" y1="{y(s.min):.1f}" x2="{cx + half / 2:.1f}" '
            f'y2="{y(s.min):.1f}" stroke="black"/>',
            f'<line x1="{cx - half / 2:.1f}" y1="{y(s.max):.1f}" x2="{cx + half / 2:.1f}" '
            f'y2="{y(s.max):.1f}" stroke="black"/>',
            f'<rect x="{cx - half:.1f}" y="{y(s.q3):.1f}" width="{2 * half:.1f}" '
            f'height="{max(y(s.q1) - y(s.q3), 0.5):.1f}" fill="#9cc3e6" stroke="black"/>',
            f'<line x1="{cx - half:.1f}" y1="{y(s.median):.1f}" x2="{cx + half:.1f}" '
            f'y2="{y(s.median):.1f}" stroke="#c0392b" stroke-width="2"/>',
            f'<text x="{cx:.1f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">'
            f"{escape(label)}</text>",
        ]
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
