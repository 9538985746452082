"""Static SVG rendering of probability distributions.

One-dimensional graphs get a bar chart over vertex ids; grids get a heatmap
laid out on the lattice.  Output is a plain SVG string built by hand so the
rendering path carries no plotting dependency and is byte-deterministic.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph

__all__ = ["distribution_svg", "write_svg"]

# Five anchor colours, dark to bright, interpolated linearly.
_HEAT_ANCHORS = (
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
)


def _heat_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(_HEAT_ANCHORS) - 1)
    i = min(int(pos), len(_HEAT_ANCHORS) - 2)
    f = pos - i
    c0, c1 = _HEAT_ANCHORS[i], _HEAT_ANCHORS[i + 1]
    r, g, b = (round(a + (b_ - a) * f) for a, b_ in zip(c0, c1))
    return f"#{r:02x}{g:02x}{b:02x}"


def _svg_header(width: int, height: int, title: str | None) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    return parts


def _bar_chart(p: np.ndarray, width: int, height: int, title: str | None) -> str:
    n = p.shape[0]
    margin = 40
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    pmax = float(p.max()) if p.size and p.max() > 0 else 1.0
    parts = _svg_header(width, height, title)
    parts.append(
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>'
    )
    bar_w = plot_w / n
    for v in range(n):
        h = plot_h * float(p[v]) / pmax
        x = margin + v * bar_w
        y = height - margin - h
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{max(bar_w - 0.5, 0.5):.2f}" '
            f'height="{h:.2f}" fill="#3b528b"/>'
        )
    parts.append(
        f'<text x="{margin}" y="{margin - 6}" font-family="sans-serif" font-size="11">'
        f"max p = {pmax:.6g}</text>"
    )
    parts.append(
        f'<text x="{margin}" y="{height - margin + 14}" font-family="sans-serif" '
        f'font-size="11">0</text>'
    )
    parts.append(
        f'<text x="{width - margin}" y="{height - margin + 14}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{n - 1}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _heatmap(p: np.ndarray, nx: int, ny: int, width: int, height: int, title: str | None) -> str:
    margin = 40
    cell = min((width - 2 * margin) / nx, (height - 2 * margin) / ny)
    pmax = float(p.max()) if p.size and p.max() > 0 else 1.0
    x0 = (width - cell * nx) / 2
    y0 = (height - cell * ny) / 2
    parts = _svg_header(width, height, title)
    for y in range(ny):
        for x in range(nx):
            val = float(p[x + nx * y]) / pmax
            parts.append(
                f'<rect x="{x0 + x * cell:.2f}" y="{y0 + (ny - 1 - y) * cell:.2f}" '
                f'width="{cell:.2f}" height="{cell:.2f}" fill="{_heat_color(val)}"/>'
            )
    parts.append(
        f'<text x="{x0:.1f}" y="{y0 - 6:.1f}" font-family="sans-serif" font-size="11">'
        f"max p = {pmax:.6g}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def distribution_svg(
    p: np.ndarray,
    graph: Graph | None = None,
    *,
    width: int = 960,
    height: int = 540,
    title: str | None = None,
) -> str:
    """Render one distribution: a heatmap for grid graphs, bars otherwise."""
    p = np.asarray(p, dtype=float)
    if graph is not None and graph.kind == "grid":
        nx, ny = graph.params[0], graph.params[1]
        return _heatmap(p, nx, ny, width, height, title)
    return _bar_chart(p, width, height, title)


def write_svg(path, svg_text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(svg_text)
