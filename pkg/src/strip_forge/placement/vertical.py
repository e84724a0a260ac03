"""Integral placement of vertical items from a configuration LP solution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..geometry import ExtraBox, Rect
from .lp import ConfigSolution, LPBox, LPInfeasible, solve_config_lp


class PlacementError(RuntimeError):
    """The structure cannot host the items (the upstream guess was wrong)."""


@dataclass
class SubBox:
    rect: Rect
    uniform_height: int
    item_ids: list


@dataclass
class VerticalPlacement:
    positions: dict  # id -> (x, y), absolute, for items kept inside the boxes
    sub_boxes: list
    extra_boxes: list
    empty_boxes: list
    solution: ConfigSolution | None = None
    overflow_ids: list = field(default_factory=list)


def _fill_slots(slots, items):
    """Fill slots (length as Fraction) with items in order. An item that starts
    inside a slot but ends past its border overflows. Returns per-slot lists of
    (id, offset) and the overflow list grouped by slot."""
    placed = [[] for _ in slots]
    overflow = [[] for _ in slots]
    k, used = 0, 0
    for iid, size in items:
        while k < len(slots) and used >= slots[k]:
            k, used = k + 1, 0
        if k == len(slots):
            raise AssertionError("slot capacity exhausted before items")
        if used + size <= slots[k]:
            placed[k].append((iid, used))
        else:
            overflow[k].append((iid, size))
        used += size
    return placed, overflow


def stack_overflow(items, cap, width):
    """Stack (id, height) items one by one and cut the stack into boxes of
    height cap; an item crossing a cut gets a box of its own."""
    levels, singles = {}, []
    y = 0
    for iid, h in items:
        if h > cap:
            raise PlacementError(f"vertical item {iid} taller than the extra box height")
        k = math.floor(y / cap)
        if y + h <= (k + 1) * cap:
            levels.setdefault(k, []).append((iid, h))
        else:
            singles.append((iid, h))
        y += h
    boxes = []
    for k in sorted(levels):
        contents, off = [], 0
        for iid, h in levels[k]:
            contents.append((iid, 0, off))
            off += h
        boxes.append(ExtraBox(width, off, contents))
    boxes.extend(ExtraBox(width, h, [(iid, 0, 0)]) for iid, h in singles)
    return boxes


def place_vertical(boxes, items, extra_height, extra_width, config_universe_cap=10**6) -> VerticalPlacement:
    """Place vertical items (id, width, height) into the rectangles ``boxes``.

    Every item ends up either inside a box or in an extra box of height at
    most ``extra_height`` and width ``extra_width``.
    """
    boxes = list(boxes)
    items = sorted(items, key=lambda t: (t[2], -t[1], t[0]))
    demands = {}
    for _, w, h in items:
        demands[h] = demands.get(h, 0) + w
    if not items:
        empties = [b for b in boxes if b.area > 0]
        return VerticalPlacement({}, [], [], empties, None)
    lp_boxes = [LPBox(b.h, b.w) for b in boxes]
    sol = solve_config_lp(lp_boxes, demands, config_universe_cap)
    if isinstance(sol, LPInfeasible):
        raise PlacementError("vertical configuration LP infeasible")

    # rows: (entry index, row index in stack, y offset, height, width X)
    entries = sorted(range(len(sol.entries)), key=lambda e: (sol.entries[e][0], not sol.entries[e][1], e))
    rows_by_h = {}
    rows_of_entry = {}
    for e in entries:
        _, conf, X = sol.entries[e]
        off = 0
        rows_of_entry[e] = []
        for r, s in enumerate(conf.sizes()):
            rows_by_h.setdefault(s, []).append((e, r))
            rows_of_entry[e].append((off, s))
            off += s
    content = {}  # (entry, row) -> [(id, x offset)]
    overflow = {e: [] for e in entries}
    for h, rows in rows_by_h.items():
        group = [(iid, w) for iid, w, hh in items if hh == h]
        slots = [sol.entries[e][2] for e, _ in rows]
        placed, over = _fill_slots(slots, group)
        for (e, r), pl, ov in zip(rows, placed, over):
            content[(e, r)] = pl
            overflow[e].extend((iid, h) for iid, _ in ov)

    positions, sub_boxes, empty_boxes, extra = {}, [], [], []
    cursor = {i: 0 for i in range(len(boxes))}
    for e in entries:
        bi, conf, X = sol.entries[e]
        if not conf:
            continue
        box = boxes[bi]
        width = math.floor(X)
        x0 = box.x + cursor[bi]
        cursor[bi] += width
        for r, (off, s) in enumerate(rows_of_entry[e]):
            ids = []
            for iid, dx in content[(e, r)]:
                positions[iid] = (x0 + int(dx), box.y + off)
                ids.append(iid)
            sub_boxes.append(SubBox(Rect(x0, box.y + off, width, s), s, ids))
        if width and box.h > conf.total:
            empty_boxes.append(Rect(x0, box.y + conf.total, width, box.h - conf.total))
        extra.extend(stack_overflow(overflow[e], extra_height, extra_width))
    for bi, box in enumerate(boxes):
        rest = box.w - cursor[bi]
        if rest > 0 and box.h > 0:
            empty_boxes.append(Rect(box.x + cursor[bi], box.y, rest, box.h))
    over_ids = [iid for e in entries for iid, _ in overflow[e]]
    return VerticalPlacement(positions, sub_boxes, extra, empty_boxes, sol, over_ids)
