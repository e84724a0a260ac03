"""Deterministic SVG pictures of packings."""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from ..classify import ItemClass, Params, classify
from ..core import Instance, Packing

COLORS = {
    ItemClass.LARGE: "#4e79a7",
    ItemClass.TALL: "#e15759",
    ItemClass.VERTICAL: "#f28e2b",
    ItemClass.MEDIUM_VERTICAL: "#b07aa1",
    ItemClass.HORIZONTAL: "#59a14f",
    ItemClass.SMALL: "#edc948",
    ItemClass.MEDIUM: "#9c755f",
}
PLAIN = "#bab0ac"


def render_svg(instance: Instance, packing: Packing, scale: int = 10, params: Params | None = None,
               height_rule: int | None = None) -> str:
    """One <rect> per placed item on a strip of width W, y growing upwards.

    Every coordinate is an integer multiple of ``scale``. Items are colored
    by class when ``params`` is given. The dashed line marks the packing
    height, or ``height_rule`` when that is set.
    """
    if not isinstance(scale, int) or scale < 1:
        raise ValueError("scale must be a positive integer")
    items = instance.by_id()
    W = instance.strip_width
    rule = packing.height if height_rule is None else height_rule
    top = max(packing.height, rule, 1)
    pad = scale
    vw, vh = (W + 2) * scale, (top + 2) * scale

    def Y(y):  # strip y to svg y
        return pad + (top - y) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{vw}" height="{vh}" viewBox="0 0 {vw} {vh}">']
    out.append(f'  <rect class="strip" x="{pad}" y="{pad}" width="{W * scale}" height="{top * scale}" '
               'fill="none" stroke="#000000" stroke-width="1"/>')
    for p in sorted(packing.placements, key=lambda q: (q.y, q.x, q.item_id)):
        it = items[p.item_id]
        w, h = it.dims(p.rotated)
        fill = COLORS[classify(it, params, W)] if params is not None else PLAIN
        out.append(f'  <rect class="item" data-id={quoteattr(p.item_id)} x="{pad + p.x * scale}" y="{Y(p.y + h)}" '
                   f'width="{w * scale}" height="{h * scale}" fill="{fill}" stroke="#000000" stroke-width="1">'
                   f"<title>{escape(p.item_id)} {w}x{h}</title></rect>")
    out.append(f'  <line class="height" x1="{pad}" y1="{Y(rule)}" x2="{pad + W * scale}" y2="{Y(rule)}" '
               'stroke="#d62728" stroke-dasharray="4 2" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
