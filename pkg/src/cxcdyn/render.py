"""Plain-text render targets: hand-rolled SVG strips and tilings, PGM rasters."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .gdms import IntervalSystem, repellor_cover
from .pillowcase.tiling import Tiling

_FACE_FILLS = ("#dbe7f5", "#f5e3d0")
_LEVEL_STROKES = ("#1a1a1a", "#5b2a86", "#a23b72", "#2a9d8f",
                  "#e07a1f", "#4a6fa5", "#8a8635", "#777777", "#bbbbbb")


def cover_strip_svg(sys: IntervalSystem, depth: int, width: int = 900,
                    row_height: int = 28) -> str:
    """One row per cover depth, one rectangle per cylinder."""
    span_left = min(b.left for b in sys.bases)
    span_right = max(b.right for b in sys.bases)
    scale = width / (span_right - span_left)
    height = (depth + 1) * row_height
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">']
    for m in range(depth + 1):
        y = m * row_height + 4
        for cyl in repellor_cover(sys, m):
            x = (cyl.left - span_left) * scale
            w = max(cyl.length * scale, 0.5)
            fill = _FACE_FILLS[cyl.component % 2]
            parts.append(f'  <rect x="{x:.3f}" y="{y}" width="{w:.3f}" '
                         f'height="{row_height - 8}" fill="{fill}" stroke="#333" '
                         f'stroke-width="0.4" />')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _svg_xy(x: Fraction, y: Fraction, scale: int) -> tuple[float, float]:
    # fundamental rectangle [0,1/2] x [-1/2,1/2]; SVG y axis points down
    return float(x) * scale, (0.5 - float(y)) * scale


def tiling_svg(tiling: Tiling, scale: int = 800) -> str:
    width, height = scale // 2, scale
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">']
    for tile in tiling.cells:
        points = [_svg_xy(x, y, scale) for x, y in tile.vertices]
        path = "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in points) + " Z"
        parts.append(f'  <path d="{path}" fill="{_FACE_FILLS[tile.face]}" '
                     f'stroke="#555" stroke-width="0.35" />')
    for level in range(len(tiling.skeleton) - 1, -1, -1):
        stroke = _LEVEL_STROKES[min(level, len(_LEVEL_STROKES) - 1)]
        width_px = max(2.4 - 0.3 * level, 0.5)
        for (p, q) in tiling.skeleton[level]:
            x1, y1 = _svg_xy(p[0], p[1], scale)
            x2, y2 = _svg_xy(q[0], q[1], scale)
            parts.append(f'  <line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" '
                         f'y2="{y2:.3f}" stroke="{stroke}" stroke-width="{width_px}" />')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_pgm(img: np.ndarray, path: str) -> None:
    """ASCII PGM (P2), 8-bit grayscale."""
    rows, cols = img.shape
    with open(path, "w") as handle:
        handle.write(f"P2\n{cols} {rows}\n255\n")
        for row in img:
            handle.write(" ".join(str(int(v)) for v in row) + "\n")


def points_pgm(points: Sequence[complex], resolution: int = 512,
               margin: float = 0.05) -> np.ndarray:
    """Raster a complex point cloud to a grayscale image (dark on light)."""
    xs = np.array([z.real for z in points])
    ys = np.array([z.imag for z in points])
    lo_x, hi_x = xs.min(), xs.max()
    lo_y, hi_y = ys.min(), ys.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9) * (1 + 2 * margin)
    ox = lo_x - margin * span
    oy = lo_y - margin * span
    img = np.full((resolution, resolution), 255, dtype=np.uint8)
    cols = np.clip(((xs - ox) / span * (resolution - 1)).astype(int), 0, resolution - 1)
    rows = np.clip(((ys - oy) / span * (resolution - 1)).astype(int), 0, resolution - 1)
    img[resolution - 1 - rows, cols] = 0
    return img
