"""Horizontal items: width grouping, a configuration LP over widths, top box."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..baselines import dh_order
from ..core import Item
from ..geometry import Rect
from .lp import ConfigSolution, LPBox, LPInfeasible, solve_config_lp
from .vertical import PlacementError, _fill_slots


@dataclass
class HorizontalPlacement:
    positions: dict  # id -> (x, y) absolute inside the boxes
    top_box: dict  # id -> (x, y) relative to the top box corner
    top_height: int
    empty_boxes: list
    rounded_width: dict  # id -> reserved width
    group_height: int = 0
    diverted: list = field(default_factory=list)  # widest group
    solution: ConfigSolution | None = None


def group_widths(items, eps, delta):
    """Stack widest first and cut it every h_G units (by item bottoms).

    Returns (h_G, groups) where groups is a list of lists of (id, w, h).
    """
    stack = sorted(items, key=lambda t: (-t[1], -t[2], t[0]))
    total = sum(h for _, _, h in stack)
    hg = max(1, math.floor(eps * delta * delta * total))
    groups: dict[int, list] = {}
    y = 0
    for t in stack:
        groups.setdefault(y // hg, []).append(t)
        y += t[2]
    return hg, [groups[k] for k in sorted(groups)]


def _shelf(items, W):
    """NFDH of (id, w, h) items inside width W; returns ({id: (x, y)}, height)."""
    pos, x, y, shelf_h = {}, 0, 0, 0
    for it in dh_order(Item(i, w, h) for i, w, h in items):
        if x + it.width > W:
            y, x, shelf_h = y + shelf_h, 0, 0
        if shelf_h == 0:
            shelf_h = it.height
        pos[it.id] = (x, y)
        x += it.width
    return pos, y + shelf_h


def place_horizontal(boxes, items, eps, delta, W, config_universe_cap=10**6) -> HorizontalPlacement:
    """Place horizontal items (id, width, height) into the rectangles ``boxes``.

    The widest group and every item crossing a configuration border go to a
    top box of width W.
    """
    boxes = list(boxes)
    if not items:
        return HorizontalPlacement({}, {}, 0, [b for b in boxes if b.area > 0], {})
    hg, groups = group_widths(items, Fraction(eps), Fraction(delta))
    diverted = groups[0]
    rounded = {}
    for g in groups:
        wmax = max(w for _, w, _ in g)
        for iid, _, _ in g:
            rounded[iid] = wmax
    rest = [t for g in groups[1:] for t in g]
    demands = {}
    for iid, _, h in rest:
        demands[rounded[iid]] = demands.get(rounded[iid], 0) + h

    positions, empty_boxes, top_items = {}, [], list(diverted)
    sol = None
    if rest:
        lp_boxes = [LPBox(b.w, b.h) for b in boxes]
        sol = solve_config_lp(lp_boxes, demands, config_universe_cap)
        if isinstance(sol, LPInfeasible):
            raise PlacementError("horizontal configuration LP infeasible")
        entries = sorted(range(len(sol.entries)), key=lambda e: (sol.entries[e][0], not sol.entries[e][1], e))
        cols_by_w, cols_of_entry = {}, {}
        for e in entries:
            conf = sol.entries[e][1]
            off = 0
            cols_of_entry[e] = []
            for c, s in enumerate(conf.sizes()):
                cols_by_w.setdefault(s, []).append((e, c))
                cols_of_entry[e].append((off, s))
                off += s
        content, by_id = {}, {t[0]: t for t in rest}
        for s, cols in cols_by_w.items():
            group = sorted(((iid, h) for iid, _, h in rest if rounded[iid] == s), key=lambda t: (-t[1], t[0]))
            placed, over = _fill_slots([sol.entries[e][2] for e, _ in cols], group)
            for key, pl, ov in zip(cols, placed, over):
                content[key] = pl
                top_items.extend(by_id[iid] for iid, _ in ov)
        cursor = {i: 0 for i in range(len(boxes))}
        for e in entries:
            bi, conf, X = sol.entries[e]
            if not conf:
                continue
            box = boxes[bi]
            height = math.floor(X)
            y0 = box.y + cursor[bi]
            cursor[bi] += height
            for c, (off, s) in enumerate(cols_of_entry[e]):
                for iid, dy in content[(e, c)]:
                    positions[iid] = (box.x + off, y0 + int(dy))
            if height and box.w > conf.total:
                empty_boxes.append(Rect(box.x + conf.total, y0, box.w - conf.total, height))
        for bi, box in enumerate(boxes):
            left = box.h - cursor[bi]
            if left > 0 and box.w > 0:
                empty_boxes.append(Rect(box.x, box.y + cursor[bi], box.w, left))
    else:
        empty_boxes = [b for b in boxes if b.area > 0]
    top, top_h = _shelf(top_items, W)
    return HorizontalPlacement(positions, top, top_h, empty_boxes, rounded, hg, [t[0] for t in diverted], sol)
