"""Radar-chart (Kiviat) export of hand fingerprints as SVG + CSV.

SVG is the single graphic format: self-contained and parseable, so the
emitted attributes can be checked in tests. Imputed or unresponsive
channels are drawn with unfilled markers. A CSV twin with the plotted
values is always written alongside.
"""

from __future__ import annotations

import csv
import io
import math
import os
from typing import Sequence

from .errors import DataError
from .fingerprint import Fingerprint, averaged_fingerprint
from .hand import FINGERS

_SIZE = 420
_MARGIN = 50
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf")


def _axis_angles() -> list[float]:
    # channel I points up; axes proceed clockwise
    return [math.pi / 2 - 2 * math.pi * i / len(FINGERS)
            for i in range(len(FINGERS))]


def _point(value: float, angle: float, scale: float, radius: float):
    r = max(value, 0.0) * scale
    x = _SIZE / 2 + min(r, radius) * math.cos(angle)
    y = _SIZE / 2 - min(r, radius) * math.sin(angle)
    return x, y


def kiviat_svg(fingerprints: Sequence[Fingerprint]) -> str:
    """Render one polygon per fingerprint on shared 5-axis radar axes."""
    if not fingerprints:
        raise DataError("need at least one fingerprint to plot")
    radius = _SIZE / 2 - _MARGIN
    peak = max((max(fp.values.values()) for fp in fingerprints), default=0.0)
    scale = radius / peak if peak > 0 else 0.0
    angles = _axis_angles()
    cx = cy = _SIZE / 2

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
    ]
    # grid: axes and reference rings
    for frac in (0.25, 0.5, 0.75, 1.0):
        ring = " ".join(
            f"{cx + frac * radius * math.cos(a):.1f},"
            f"{cy - frac * radius * math.sin(a):.1f}" for a in angles)
        parts.append(f'<polygon points="{ring}" fill="none" stroke="#cccccc" '
                     f'stroke-width="1" class="grid"/>')
    for finger, a in zip(FINGERS, angles):
        x2 = cx + radius * math.cos(a)
        y2 = cy - radius * math.sin(a)
        parts.append(f'<line x1="{cx}" y1="{cy}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="#999999" stroke-width="1"/>')
        lx = cx + (radius + 18) * math.cos(a)
        ly = cy - (radius + 18) * math.sin(a)
        parts.append(f'<text x="{lx:.1f}" y="{ly:.1f}" text-anchor="middle" '
                     f'dominant-baseline="middle" font-size="14">{finger}</text>')
    # one polygon + markers per fingerprint
    for idx, fp in enumerate(fingerprints):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = [_point(fp.values[f], a, scale, radius)
               for f, a in zip(FINGERS, angles)]
        point_attr = " ".join(f"{x:.1f},{y:.1f}" for x, y in pts)
        label = fp.material_label or f"fingerprint-{idx + 1}"
        parts.append(f'<polygon points="{point_attr}" fill="{color}" '
                     f'fill-opacity="0.15" stroke="{color}" stroke-width="2" '
                     f'class="fingerprint" data-label="{label}"/>')
        for finger, (x, y) in zip(FINGERS, pts):
            fill = "none" if fp.imputed[finger] else color
            parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="5" '
                         f'fill="{fill}" stroke="{color}" stroke-width="2" '
                         f'data-channel="{finger}" data-label="{label}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def kiviat_csv(fingerprints: Sequence[Fingerprint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "channel", "value", "imputed", "averaged"])
    for idx, fp in enumerate(fingerprints):
        label = fp.material_label or f"fingerprint-{idx + 1}"
        f_bar = averaged_fingerprint(fp)
        for finger in FINGERS:
            writer.writerow([label, finger, repr(fp.values[finger]),
                             int(fp.imputed[finger]), repr(f_bar)])
    return buf.getvalue()


def export_kiviat(fingerprints: Sequence[Fingerprint], path) -> None:
    """Write ``path`` (SVG) and its CSV twin next to it."""
    path = os.fspath(path)
    base = path[:-4] if path.endswith(".svg") else path
    svg_path = base + ".svg"
    csv_path = base + ".csv"
    try:
        for out, text in ((svg_path, kiviat_svg(fingerprints)),
                          (csv_path, kiviat_csv(fingerprints))):
            tmp = f"{out}.tmp"
            with open(tmp, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, out)
    except OSError as exc:
        raise DataError(f"cannot write radar chart near {path}: {exc}") from exc
