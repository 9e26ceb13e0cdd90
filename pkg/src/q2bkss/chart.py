"""SVG chart of an E2 page: s upward, t - s to the right.

Glyphs: filled square for a free summand, filled circle for Z/3, open circle
with the exponent written inside for Z/3^k (k >= 2).  Multiplicities larger
than one are written next to the glyph.
"""

from __future__ import annotations

from collections import Counter
from xml.sax.saxutils import escape

CELL = 28
MARGIN = 40
GLYPH = 5


def _glyphs(module) -> list:
    """``[(kind, exponent, count)]`` in drawing order."""
    out = []
    if module.free_rank:
        out.append(("free", None, module.free_rank))
    for k, n in sorted(Counter(module.torsion_exponents).items()):
        out.append(("z3" if k == 1 else "z3k", k, n))
    for name in module.meta.get("placeholders", ()):
        out.append(("placeholder", name, 1))
    return out


def render_svg(page, title: str = "") -> str:
    cells = {(b.chart_x, b.s): m for b, m in page.entries.items() if not m.is_zero() or m.meta.get("placeholders")}
    xs = [b.chart_x for b in page.entries] or [0]
    x0, x1 = min(xs), max(xs)
    smax = 3
    width = (x1 - x0 + 1) * CELL + 2 * MARGIN
    height = (smax + 1) * CELL * 2 + 2 * MARGIN

    def px(x):
        return MARGIN + (x - x0) * CELL + CELL // 2

    def py(s):
        return height - MARGIN - s * CELL * 2 - CELL // 2

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="8">',
    ]
    if title:
        parts.append(f'<text x="{MARGIN}" y="16" font-size="12">{escape(title)}</text>')
    # axes and grid labels
    parts.append(f'<line x1="{MARGIN}" y1="{py(0) + CELL // 2}" x2="{width - MARGIN}" '
                 f'y2="{py(0) + CELL // 2}" stroke="#888"/>')
    for x in range(x0, x1 + 1):
        if x % 4 == 0:
            parts.append(f'<text x="{px(x)}" y="{height - MARGIN + 14}" text-anchor="middle">{x}</text>')
    for s in range(smax + 1):
        parts.append(f'<text x="{MARGIN - 14}" y="{py(s) + 3}" text-anchor="end">{s}</text>')
    for (x, s), module in sorted(cells.items()):
        glyphs = _glyphs(module)
        for n, (kind, k, count) in enumerate(glyphs):
            cx = px(x)
            cy = py(s) - n * (2 * GLYPH + 4)
            if kind == "free":
                parts.append(f'<rect x="{cx - GLYPH}" y="{cy - GLYPH}" width="{2 * GLYPH}" '
                             f'height="{2 * GLYPH}" fill="black"/>')
            elif kind == "z3":
                parts.append(f'<circle cx="{cx}" cy="{cy}" r="{GLYPH}" fill="black"/>')
            elif kind == "z3k":
                parts.append(f'<circle cx="{cx}" cy="{cy}" r="{GLYPH}" fill="white" stroke="black"/>')
                parts.append(f'<text x="{cx}" y="{cy + 3}" text-anchor="middle" font-size="7">{k}</text>')
            else:
                parts.append(f'<text x="{cx}" y="{cy + 3}" text-anchor="middle">{escape(k)}</text>')
            if count > 1:
                parts.append(f'<text x="{cx + GLYPH + 1}" y="{cy - 2}" font-size="6">{count}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
