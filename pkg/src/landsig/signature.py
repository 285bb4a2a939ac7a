"""Hourly-count normalization, curve completeness, and signature export.

Normalization divides each hourly count by the overall hourly average, so a
normalized curve has mean 1. A flat curve therefore sits on the 1.0 line and
peaks read directly as multiples of the average hour.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import EmptySignatureError
from .model import HOURS, HourlyCounts, TemporalSignature

# Label -> stroke color, echoing typical zoning-map legends. The web UI
# uses the same palette.
LABEL_COLORS = {
    "Business": "#2e6fb7",
    "Residential": "#d65fa4",
    "Education": "#d9a400",
    "Recreation": "#6e6e6e",
}
_FALLBACK_COLORS = ("#4daf4a", "#e41a1c", "#984ea3", "#ff7f00")


def normalize(counts: HourlyCounts) -> TemporalSignature:
    """Scale counts so the 24 values average exactly 1.

    values[h] = counts[h] / (total / 24). Raises :class:`EmptySignatureError`
    when every hour is zero.
    """
    total = counts.total
    if total == 0:
        raise EmptySignatureError("all 24 hourly counts are zero")
    # (counts * 24) is exact in float64, so the curve shape is invariant
    # under integer scaling of the counts.
    values = counts.counts * 24.0 / total
    return TemporalSignature(values)


def is_complete(counts: HourlyCounts) -> bool:
    """True iff every hour of the day has at least one event."""
    return bool((counts.counts > 0).all())


def missing_hours(counts: HourlyCounts) -> list[int]:
    return [h for h in range(HOURS) if counts[h] == 0]


def to_csv(sig: TemporalSignature) -> str:
    """Two-column CSV, one row per hour."""
    lines = ["hour,value"]
    lines += [f"{h},{float(sig.values[h])!r}" for h in range(HOURS)]
    return "\n".join(lines) + "\n"


def chart_svg(series: Sequence[tuple[str, TemporalSignature]], title: str = "") -> str:
    """Render one or more signatures as a standalone SVG line chart.

    Fixed layout: 24 points per curve, hour ticks 0-23, and a dashed guide
    line at 1.0 (the mean of any normalized curve). Output is a pure function
    of the inputs, so repeated runs are byte-identical.
    """
    width, height = 640, 360
    left, right, top, bottom = 56, 20, 34, 44
    plot_w = width - left - right
    plot_h = height - top - bottom

    peak = max((float(sig.values.max()) for _, sig in series), default=1.0)
    y_max = max(1.2, peak * 1.1)

    def x_of(hour: float) -> float:
        return left + plot_w * hour / (HOURS - 1)

    def y_of(value: float) -> float:
        return top + plot_h * (1.0 - value / y_max)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>'
        )

    # axes
    parts.append(
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>'
    )
    for h in range(HOURS):
        x = x_of(h)
        parts.append(
            f'<line x1="{x:.1f}" y1="{top + plot_h}" x2="{x:.1f}" y2="{top + plot_h + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{top + plot_h + 16}" text-anchor="middle">{h}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 8}" text-anchor="middle">hour of day</text>'
    )
    y_ticks = np.linspace(0.0, y_max, 5)
    for tick in y_ticks:
        y = y_of(float(tick))
        parts.append(
            f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end">{tick:.2f}</text>'
        )

    # mean guide line at 1.0
    y1 = y_of(1.0)
    parts.append(
        f'<line x1="{left}" y1="{y1:.1f}" x2="{left + plot_w}" y2="{y1:.1f}" '
        'stroke="#999999" stroke-dasharray="5,4"/>'
    )

    fallback = iter(_FALLBACK_COLORS * 8)
    for i, (name, sig) in enumerate(series):
        color = LABEL_COLORS.get(name) or next(fallback)
        points = " ".join(
            f"{x_of(h):.1f},{y_of(float(sig.values[h])):.1f}" for h in range(HOURS)
        )
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )
        legend_y = top + 14 * i
        parts.append(
            f'<line x1="{left + plot_w - 110}" y1="{legend_y:.1f}" '
            f'x2="{left + plot_w - 90}" y2="{legend_y:.1f}" stroke="{color}" stroke-width="1.8"/>'
        )
        parts.append(f'<text x="{left + plot_w - 84}" y="{legend_y + 4:.1f}">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
