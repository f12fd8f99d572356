"""ASCII and SVG pictures of triangular regions and their tilings."""

from __future__ import annotations

import math
from pathlib import Path

from .core import Monomial, TriRegion
from .errors import PreconditionError
from .tiling import Tiling

UNIT = 20
HEIGHT = UNIT * math.sqrt(3) / 2
MARGIN = 10


def row_cells(d: int, r: int) -> list[tuple[str, Monomial]]:
    """Triangles of row ``r`` (counted from the bottom) from left to right."""
    width = d - 1 - r
    cells: list[tuple[str, Monomial]] = []
    for k in range(width + 1):
        cells.append(("up", Monomial(r, width - k, k)))
        if k < width:
            cells.append(("down", Monomial(r, width - 1 - k, k)))
    return cells


def ascii_region(region: TriRegion) -> str:
    """One line per row, top row first: ``^``/``v`` for present triangles, ``.`` for removed ones."""
    d = region.d
    lines = []
    for r in range(d - 1, -1, -1):
        chars = []
        for kind, m in row_cells(d, r):
            present = m in (region.up if kind == "up" else region.down)
            chars.append(("^" if kind == "up" else "v") if present else ".")
        lines.append(" " * r + "".join(chars))
    return "\n".join(lines)


def triangle_points(kind: str, m: Monomial) -> list[tuple[float, float]]:
    """Vertices in plane coordinates with the lower-left corner of the big triangle at the origin."""
    r, k = m[0], m[2]
    x0, y0 = r * UNIT / 2 + k * UNIT, r * HEIGHT
    if kind == "up":
        return [(x0, y0), (x0 + UNIT, y0), (x0 + UNIT / 2, y0 + HEIGHT)]
    return [(x0 + UNIT / 2, y0 + HEIGHT), (x0 + UNIT, y0), (x0 + 3 * UNIT / 2, y0 + HEIGHT)]


def lozenge_points(down: Monomial, up: Monomial) -> list[tuple[float, float]]:
    pts = {(round(x, 6), round(y, 6)) for x, y in triangle_points("up", up) + triangle_points("down", down)}
    if len(pts) != 4:
        raise PreconditionError(f"{down} and {up} do not share an edge")
    cx = sum(p[0] for p in pts) / 4
    cy = sum(p[1] for p in pts) / 4
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def svg_region(region: TriRegion, tiling: Tiling | None = None) -> str:
    """SVG with the frame, every triangle, and optional lozenges; removed triangles are shaded dark."""
    d = region.d
    width = d * UNIT + 2 * MARGIN
    height = d * HEIGHT + 2 * MARGIN

    def fmt(points):
        return " ".join(f"{MARGIN + x:.2f},{height - MARGIN - y:.2f}" for x, y in points)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
        '<style>.frame{fill:none;stroke:#000;stroke-width:1.5}.tri{fill:#fff;stroke:#999;stroke-width:0.5}'
        '.puncture{fill:#333;stroke:#333;stroke-width:0.5}.lozenge{fill:#cde;stroke:#000;stroke-width:1}</style>',
        f'<polygon class="frame" points="{fmt([(0, 0), (d * UNIT, 0), (d * UNIT / 2, d * HEIGHT)])}"/>',
    ]
    for r in range(d):
        for kind, m in row_cells(d, r):
            present = m in (region.up if kind == "up" else region.down)
            cls = f"tri {kind}" if present else "puncture"
            out.append(f'<polygon class="{cls}" data-label="{m}" points="{fmt(triangle_points(kind, m))}"/>')
    if tiling is not None:
        for lz in tiling.sorted():
            out.append(f'<polygon class="lozenge" data-pair="{lz.down}:{lz.up}" '
                       f'points="{fmt(lozenge_points(lz.down, lz.up))}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: str | Path, region: TriRegion, tiling: Tiling | None = None) -> None:
    try:
        Path(path).write_text(svg_region(region, tiling))
    except OSError as exc:
        raise PreconditionError(f"cannot write {path}: {exc.strerror}") from None
