"""Small items into free boxes, medium items on top."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..baselines import dh_order, pack_into_box, steinberg_conditions
from ..core import Item, total_area
from .horizontal import _shelf
from .vertical import PlacementError


@dataclass
class BoxUse:
    rect: object
    used_area: int
    full: bool  # filling stopped because the next item did not fit


@dataclass
class SmallPlacement:
    positions: dict  # id -> (x, y) absolute
    overflow: dict  # id -> (x, y) relative to the overflow box
    overflow_height: int
    usage: list = field(default_factory=list)
    discarded: list = field(default_factory=list)


def min_steinberg_height(items, W) -> int:
    """Smallest H for which the box inequalities hold at width W."""
    if not items:
        return 0
    H = max(max(it.height for it in items), -(-2 * total_area(items) // W))
    while steinberg_conditions(items, W, H):
        H += 1
    return H


def place_small(empty_boxes, items, mu, T, W, strict=False) -> SmallPlacement:
    """NFDH into every usable box in turn; leftovers into a W-wide box.

    ``items`` are (id, w, h). Boxes thinner than mu*W or lower than mu*T are
    discarded.
    """
    usable, discarded = [], []
    for b in empty_boxes:
        (usable if b.w >= mu * W and b.h >= mu * T and b.w > 0 and b.h > 0 else discarded).append(b)
    usable.sort(key=lambda b: (-b.area, b.y, b.x))
    queue = dh_order(Item(i, w, h) for i, w, h in items)
    if strict and total_area(queue) > sum(b.area for b in usable):
        raise PlacementError("free boxes too small for the small items")
    positions, usage = {}, []
    k = 0
    for b in usable:
        if k == len(queue):
            break
        x, y, shelf_h, used = 0, 0, 0, 0
        full = False
        while k < len(queue):
            it = queue[k]
            if it.width > b.w or it.height > b.h:
                full = True
                break
            if not shelf_h:
                shelf_h = it.height
            elif x + it.width > b.w:
                if y + shelf_h + it.height > b.h:
                    full = True
                    break
                y, x, shelf_h = y + shelf_h, 0, it.height
            positions[it.id] = (b.x + x, b.y + y)
            x += it.width
            used += it.area
            k += 1
        usage.append(BoxUse(b, used, full))
    left = queue[k:]
    over, H = {}, 0
    if left:
        H = min_steinberg_height(left, W)
        pos = pack_into_box(left, W, H)
        if pos is None:
            pos, H = _shelf([(it.id, it.width, it.height) for it in left], W)
        over = pos
    return SmallPlacement(positions, over, H, usage, discarded)


def place_medium(items, W):
    """NFDH of (id, w, h) items in width W: ({id: (x, y)}, height)."""
    pos, h = _shelf(items, W)
    if items:
        area = sum(w * hh for _, w, hh in items)
        assert W * h <= 2 * area + W * max(hh for _, _, hh in items)
    return pos, h
