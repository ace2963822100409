"""SVG drawings of instances and covers."""

from __future__ import annotations

import colorsys
from xml.sax.saxutils import escape

from .model import Instance, Solution

VIEW = 800
MARGIN = 20


def _palette(i: int) -> str:
    # golden-angle hue steps give well separated colours for any count
    h = (i * 0.618033988749895) % 1.0
    r, g, b = colorsys.hls_to_rgb(h, 0.55, 0.65)
    return f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}"


def render_svg(inst: Instance, sol: Solution | None = None) -> bytes:
    region = inst.region
    x0, y0, x1, y1 = (float(v) for v in region.box)
    span = max(x1 - x0, y1 - y0) or 1.0
    s = (VIEW - 2 * MARGIN) / span

    def pt(p) -> str:
        # flip y so the drawing has the usual mathematical orientation
        return f"{MARGIN + (float(p[0]) - x0) * s:.3f},{VIEW - MARGIN - (float(p[1]) - y0) * s:.3f}"

    def loop_path(loop) -> str:
        return "M" + " L".join(pt(p) for p in loop) + " Z"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEW}" height="{VIEW}" '
        f'viewBox="0 0 {VIEW} {VIEW}">',
        f"<title>{escape(inst.name)}</title>",
        f'<path d="{" ".join(loop_path(l) for l in region.loops)}" fill="white" '
        f'fill-rule="evenodd" stroke="black" stroke-width="1.5"/>',
    ]
    for hole in region.holes:
        out.append(f'<polygon points="{" ".join(pt(p) for p in hole)}" fill="#999999" stroke="black" '
                   f'stroke-width="1"/>')
    if sol is not None:
        for i, piece in enumerate(sol.pieces):
            out.append(f'<polygon points="{" ".join(pt(p) for p in piece)}" fill="{_palette(i)}" '
                       f'fill-opacity="0.35" stroke="{_palette(i)}" stroke-width="0.8"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
