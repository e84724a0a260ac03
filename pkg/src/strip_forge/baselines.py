"""Shelf heuristics, a Steinberg-contract box packer and the 2T upper bound."""

from __future__ import annotations

from dataclasses import dataclass

from ._search import BudgetExhausted, fits_in_box
from .core import Instance, Item, Packing, Placement, lower_bound, total_area


@dataclass
class Shelf:
    y: int
    height: int
    used_width: int = 0


def dh_order(items):
    """Nonincreasing height, then nonincreasing width, then id."""
    return sorted(items, key=lambda it: (-it.height, -it.width, it.id))


def _shelf_pack(items, W, first_fit):
    shelves: list[Shelf] = []
    out = []
    for it in dh_order(items):
        target = None
        if first_fit:
            for s in shelves:
                if s.used_width + it.width <= W:
                    target = s
                    break
        elif shelves and shelves[-1].used_width + it.width <= W:
            target = shelves[-1]
        if target is None:
            y = shelves[-1].y + shelves[-1].height if shelves else 0
            target = Shelf(y, it.height)
            shelves.append(target)
        out.append(Placement(it.id, target.used_width, target.y))
        target.used_width += it.width
    return out, shelves


def nfdh(instance: Instance) -> Packing:
    pl, _ = _shelf_pack(instance.items, instance.strip_width, first_fit=False)
    packing = Packing.build(instance, pl)
    if instance.items:
        W = instance.strip_width
        hmax = max(it.height for it in instance.items)
        assert W * packing.height <= 2 * total_area(instance.items) + W * hmax
    return packing


def ffdh(instance: Instance) -> Packing:
    pl, _ = _shelf_pack(instance.items, instance.strip_width, first_fit=True)
    return Packing.build(instance, pl)


# ---- Steinberg --------------------------------------------------------------

WIDTH, HEIGHT, AREA = "w_max <= W", "h_max <= H", "2*area <= W*H - (2*w_max - W)+ * (2*h_max - H)+"


@dataclass(frozen=True)
class Infeasible:
    """Which of the three box-packing inequalities failed."""

    violated: tuple[str, ...]

    def __str__(self):
        return "infeasible: " + ", ".join(self.violated)


def steinberg_conditions(items, W, H) -> tuple[str, ...]:
    if not items:
        return ()
    wmax = max(it.width for it in items)
    hmax = max(it.height for it in items)
    area = total_area(items)
    bad = []
    if wmax > W:
        bad.append(WIDTH)
    if hmax > H:
        bad.append(HEIGHT)
    if 2 * area > W * H - max(2 * wmax - W, 0) * max(2 * hmax - H, 0):
        bad.append(AREA)
    return tuple(bad)


def _skyline_pack(items, W, H):
    """Bottom-left skyline placement; returns {id: (x, y)} or None."""
    sky = [(0, W, 0)]  # (x, width, y)
    pos = {}
    for it in items:
        best = None
        for i in range(len(sky)):
            x = sky[i][0]
            if x + it.width > W:
                break
            y, j, reach = 0, i, 0
            while reach < it.width:
                y = max(y, sky[j][2])
                reach += sky[j][1]
                j += 1
            if y + it.height <= H:
                key = (y + it.height, y, x)
                if best is None or key < best[0]:
                    best = (key, x, y)
        if best is None:
            return None
        _, x, y = best
        pos[it.id] = (x, y)
        new = []
        for sx, sw, sy in sky:
            end = sx + sw
            if end <= x or sx >= x + it.width:
                new.append((sx, sw, sy))
                continue
            if sx < x:
                new.append((sx, x - sx, sy))
            if end > x + it.width:
                new.append((x + it.width, end - x - it.width, sy))
        new.append((x, it.width, y + it.height))
        new.sort()
        merged = []
        for seg in new:
            if merged and merged[-1][2] == seg[2] and merged[-1][0] + merged[-1][1] == seg[0]:
                merged[-1] = (merged[-1][0], merged[-1][1] + seg[1], seg[2])
            else:
                merged.append(seg)
        sky = merged
    return pos


def _column_pack(items, W, H):
    """Shelf packing with the axes swapped: columns filled bottom to top."""
    cols, x, y, colw, pos = [], 0, 0, 0, {}
    for it in sorted(items, key=lambda it: (-it.width, -it.height, it.id)):
        if y + it.height > H:
            x, y, colw = x + colw, 0, 0
        if x + it.width > W:
            return None
        pos[it.id] = (x, y)
        y += it.height
        colw = max(colw, it.width)
    return pos


def _candidates(items, W, H):
    inst = Instance(W, items)
    for fn in (nfdh, ffdh):
        p = fn(inst)
        if p.height <= H:
            yield {q.item_id: (q.x, q.y) for q in p.placements}
    orders = [
        dh_order(items),
        sorted(items, key=lambda it: (-it.width, -it.height, it.id)),
        sorted(items, key=lambda it: (-it.area, it.id)),
        sorted(items, key=lambda it: (-max(it.width, it.height), it.id)),
    ]
    for order in orders:
        pos = _skyline_pack(order, W, H)
        if pos is not None:
            yield pos
    pos = _column_pack(items, W, H)
    if pos is not None:
        yield pos


def pack_into_box(items, W, H, exact_budget=200_000):
    """Pack items into a W x H box by a portfolio of heuristics and a bounded
    exact search. Returns {id: (x, y)} or None when nothing was found."""
    items = list(items)
    if not items:
        return {}
    for pos in _candidates(items, W, H):
        return pos
    if W * H - total_area(items) > 20_000:
        return None
    try:
        res = fits_in_box([(it.width, it.height) for it in items], W, H, node_limit=exact_budget)
    except BudgetExhausted:
        return None
    if res is None:
        return None
    return {it.id: (x, y) for it, (x, y, _) in zip(items, res)}


class SteinbergFailure(RuntimeError):
    """Raised when the inequalities hold but no packing was produced."""


def steinberg(instance: Instance, target_height: int):
    items = instance.items
    W, H = instance.strip_width, target_height
    bad = steinberg_conditions(items, W, H)
    if bad:
        return Infeasible(bad)
    pos = pack_into_box(items, W, H)
    if pos is None:
        raise SteinbergFailure(f"no packing found for {len(items)} items in {W}x{H}")
    packing = Packing.build(instance, (Placement(i, x, y) for i, (x, y) in pos.items()))
    assert packing.height <= H
    return packing


def upper_bound_pack(instance: Instance) -> tuple[Packing, int]:
    """A packing of height at most 2 * lower_bound; also returns that bound."""
    T = lower_bound(instance)
    H = 2 * T
    if steinberg_conditions(instance.items, instance.strip_width, H):
        H += 1
    res = steinberg(instance, H)
    if isinstance(res, Infeasible):
        raise SteinbergFailure(f"2T bound preconditions failed: {res}")
    return res, H
