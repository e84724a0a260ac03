"""Column engine behind the reorder transforms.

Every column of a box is a stack of pieces: parts of tall items (moved as
whole items) and pseudo items, i.e. gaps between tall items that hold
slices. Vertical moves are decided per piece from its own coordinates, so a
tall item moves identically in all of its columns. Horizontal reordering
permutes whole columns or single anchored pieces; equal-height pieces end
up next to each other and become one container.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..geometry import Rect
from .boxes import Box, BoxKind
from .grid import Slice, TallPlacement

TALL = "tall"
PSEUDO = "pseudo"


class ReorderError(RuntimeError):
    """A shifting step produced an overlap or an unanchored piece."""


@dataclass(eq=False)
class Piece:
    kind: str
    y: Fraction
    h: Fraction
    item: TallPlacement | None = None
    offset: int = 0
    slices: tuple = ()  # pseudo only: ((origin, dy, h), ...)
    anchor: str = ""

    @property
    def top(self):
        return self.y + self.h

    def key(self, descending=False):
        h = -self.h if descending else self.h
        if self.kind == TALL:
            return (h, 0, self.item.w, self.item.id, self.offset)
        return (h, 1, 0, "", 0)

    def crosses(self, line) -> bool:
        return self.y < line < self.top


def crossing_columns(width, tall):
    cols = [[] for _ in range(width)]
    for t in tall:
        for c in range(max(t.x, 0), min(t.right, width)):
            cols[c].append(t)
    return cols


# ---- vertical steps ---------------------------------------------------------

def first_shift(tall, slice_cols, B, q, fixed=frozenset()):
    """Tall items crossing q go to the bottom, those crossing B-q to the top.

    ``slice_cols`` holds (origin, y, h) tuples per column. Returns (new tall placements, new slice columns as (origin, y, h) lists).
    """
    width = len(slice_cols)
    moved = {}
    for t in tall:
        if t.id in fixed:
            moved[t.id] = t
        elif t.y < q < t.top:
            moved[t.id] = replace(t, y=Fraction(0))
        elif t.y < B - q < t.top:
            moved[t.id] = replace(t, y=Fraction(B - t.h))
        else:
            moved[t.id] = t
    per_col = crossing_columns(width, tall)
    out = []
    for c in range(width):
        sl = list(slice_cols[c])
        down = [t for t in per_col[c] if t.id not in fixed and t.y < q < t.top]
        up = [t for t in per_col[c] if t.id not in fixed and not (t.y < q < t.top) and t.y < B - q < t.top]
        for t in down:
            sl = [(o, y + t.h, h) if y < t.y else (o, y, h) for o, y, h in sl]
        for t in up:
            sl = [(o, y - t.h, h) if y >= t.top else (o, y, h) for o, y, h in sl]
        out.append(sl)
    return [moved[t.id] for t in tall], out


def form_pieces(tall, slice_cols, B, full_threshold=None):
    """Tall parts plus one pseudo piece per slice-holding gap, per column.

    With ``full_threshold`` a bottom tall item taller than it is fused with
    everything above into a full column (its gap piece gets anchor 'full').
    """
    width = len(slice_cols)
    per_col = crossing_columns(width, tall)
    cols = []
    for c in range(width):
        ts = sorted(per_col[c], key=lambda t: t.y)
        pieces = [Piece(TALL, t.y, t.h, t, c - t.x) for t in ts]
        bounds = [Fraction(0)]
        for t in ts:
            bounds += [t.y, t.top]
        bounds.append(Fraction(B))
        sl = sorted(slice_cols[c], key=lambda s: s[1])
        used = 0
        full = bool(ts) and full_threshold is not None and ts[0].y == 0 and ts[0].h > full_threshold
        for a, b in zip(bounds[::2], bounds[1::2]):
            inside = [s for s in sl if a <= s[1] and s[1] + s[2] <= b]
            used += len(inside)
            if inside and b > a:
                p = Piece(PSEUDO, a, b - a, slices=tuple((o, y - a, h) for o, y, h in inside))
                if full and a == ts[0].top:
                    p.anchor = "full"
                pieces.append(p)
        if used != len(sl):
            raise ReorderError(f"column {c}: a slice crosses a tall item")
        pieces.sort(key=lambda p: p.y)
        cols.append(pieces)
    return cols


def second_shift(cols, B, q):
    up, mid = B - q, Fraction(B, 2)
    for col in cols:
        for p in col:
            if p.anchor != "full" and p.crosses(up) and not p.crosses(q):
                p.y += q
        for p in col:
            if p.kind == PSEUDO and p.anchor != "full" and mid <= p.y and p.top <= up:
                p.y = up
        for p in col:
            if p.anchor != "full" and p.crosses(mid) and not p.crosses(q) and not p.crosses(up):
                p.y = up - p.h
        col.sort(key=lambda p: p.y)
    check_columns(cols, "second shift")


def check_columns(cols, stage):
    for c, col in enumerate(cols):
        s = sorted(col, key=lambda p: p.y)
        for a, b in zip(s, s[1:]):
            if b.y < a.top:
                raise ReorderError(f"{stage}: overlap in column {c}")


def _stack(y, pieces):
    out, off = [], Fraction(0)
    for p in pieces:
        out += [(o, off + dy, h) for o, dy, h in p.slices]
        off += p.h
    return Piece(PSEUDO, y, off, slices=tuple(out))


def _region_free(col, lo, hi, skip):
    for p in col:
        if any(p is k for k in skip):
            continue
        if p.y < hi and lo < p.top:
            return False
    return True


def fuse(cols, B, q):
    """Move pseudo pieces that touch none of 0, B-q, B+q onto an anchored spot."""
    up, mid, ext = B - q, Fraction(B, 2), B + q
    for c, col in enumerate(cols):
        loose = [p for p in col if p.kind == PSEUDO and p.anchor != "full"
                 and p.y != 0 and p.y != up and p.top != up and p.top != ext]
        if not loose:
            continue
        groups = [loose] + ([[p] for p in loose] if len(loose) > 1 else [])
        placed = set()
        for grp in groups:
            grp = [p for p in grp if id(p) not in placed]
            if not grp:
                continue
            new = _place_loose(col, grp, B, q)
            if new is None:
                if len(grp) == len(loose) and len(loose) > 1:
                    continue
                raise ReorderError(f"column {c}: no anchored spot for a pseudo item")
            removed, piece = new
            for p in removed:
                col.remove(p)
                placed.add(id(p))
            col.append(piece)
            col.sort(key=lambda p: p.y)
    check_columns(cols, "fusion")


def _place_loose(col, grp, B, q):
    up, mid, ext = B - q, Fraction(B, 2), B + q
    tot = sum(p.h for p in grp)
    top54 = next((p for p in col if p.top == ext and p not in grp), None)
    bot0 = next((p for p in col if p.y == 0 and p not in grp), None)

    def pseudo_at(pred):
        return next((p for p in col if p.kind == PSEUDO and p not in grp and pred(p)), None)

    def wide_top(h54, h0):
        return h54 > 2 * q and h0 > mid

    cands = []
    if top54 is not None and top54.h > 2 * q:
        base = pseudo_at(lambda p: p.y == mid)
        stack = ([base] if base else []) + grp
        cands.append((mid, stack))
    base = pseudo_at(lambda p: p.y == up)
    cands.append((up, ([base] if base else []) + grp))
    if bot0 is not None and bot0.kind == PSEUDO:
        cands.append((Fraction(0), [bot0] + grp))
    if top54 is not None and top54.kind == PSEUDO:
        cands.append((ext - top54.h - tot, grp + [top54]))
    base = pseudo_at(lambda p: p.top == up)
    cands.append((up - tot - (base.h if base else 0), grp + ([base] if base else [])))
    for y, stack in cands:
        h = sum(p.h for p in stack)
        if y < 0 or y + h > ext:
            continue
        if not _region_free(col, y, y + h, stack):
            continue
        h0 = h if y == 0 else (bot0.h if bot0 is not None and bot0 not in stack else 0)
        h54 = h if y + h == ext else (top54.h if top54 is not None and top54 not in stack else 0)
        if wide_top(h54, h0):
            continue
        return stack, _stack(y, stack)
    return None


# ---- horizontal layout ------------------------------------------------------

A1, A2, A3, REST = "A1", "A2", "A3", "R"


def classify_columns(cols, B, q):
    """Anchor every piece and sort columns into the four groups."""
    up, mid, ext = B - q, Fraction(B, 2), B + q
    out = []
    for c, col in enumerate(cols):
        slots = {}
        full = any(p.y == 0 and p.h > up for p in col)
        top = next((p for p in col if p.top == ext), None)
        if full:
            group = A1
        elif top is not None and top.h > 2 * q:
            group = A2
        elif any(p.y == 0 and p.h > mid for p in col):
            group = A3
        else:
            group = REST
        for p in col:
            if p.y == 0:
                a = "b0"
            elif group == A1 and p.top == B:
                a = "t1"
            elif p.top == ext:
                a = "t54"
            elif p.y == up:
                a = "b34"
            elif p.top == up:
                a = "t34"
            elif group == A2 and p.y == mid:
                a = "b12"
            else:
                raise ReorderError(f"column {c}: piece at {p.y}+{p.h} has no anchor")
            if a in slots:
                raise ReorderError(f"column {c}: two pieces anchored at {a}")
            allowed = {A1: {"b0", "t1"}, A2: {"b0", "t54", "b12"},
                       A3: {"b0", "t34", "b34", "t54"}, REST: {"b0", "t34", "b34", "t54"}}[group]
            if a not in allowed:
                raise ReorderError(f"column {c}: anchor {a} in group {group}")
            p.anchor = a
            slots[a] = p
        out.append((group, slots))
    return out


def _sorted(pieces, descending):
    real = [p for p in pieces if p is not None]
    real.sort(key=lambda p: p.key(descending))
    pad = [None] * (len(pieces) - len(real))
    return real + pad if descending else pad + real


def _resort(layout, lo, hi, name, descending):
    vals = _sorted([layout[k].get(name) for k in range(lo, hi)], descending)
    for k, p in zip(range(lo, hi), vals):
        if p is None:
            layout[k].pop(name, None)
        else:
            layout[k][name] = p


def arrange(classified):
    """Column order A2 | R | A3 | A1 followed by the per-area sorts."""
    def col_key(slots, name, descending):
        p = slots.get(name)
        if p is None:
            return (1,) if descending else (-1,)
        return (0,) + p.key(descending) if descending else (0,) + p.key(False)

    idx = list(range(len(classified)))
    a2 = sorted((i for i in idx if classified[i][0] == A2), key=lambda i: (col_key(classified[i][1], "t54", True), i))
    rest = [i for i in idx if classified[i][0] == REST]
    a3 = sorted((i for i in idx if classified[i][0] == A3), key=lambda i: (col_key(classified[i][1], "b0", False), i))
    a1 = sorted((i for i in idx if classified[i][0] == A1), key=lambda i: (_a1_key(classified[i][1]), i))
    order = a2 + rest + a3 + a1
    layout = [dict(classified[i][1]) for i in order]
    n2, nr, n3 = len(a2), len(rest), len(a3)
    _resort(layout, 0, n2, "b12", False)
    _resort(layout, n2, n2 + nr + n3, "b34", False)
    _resort(layout, n2, n2 + nr + n3, "t54", True)
    _resort(layout, 0, n2 + nr, "b0", True)
    _resort(layout, 0, n2 + nr, "t34", False)
    groups = [A2] * n2 + [REST] * nr + [A3] * n3 + [A1] * len(a1)
    return layout, groups


def _a1_key(slots):
    p = slots.get("b0")
    if p is None or p.kind == PSEUDO:
        return (1,)
    return (0,) + p.key(True)


# ---- output -----------------------------------------------------------------

def emit(layout, x0=0):
    """Turn column slots into tall placements and slice columns.

    Raises ReorderError if a tall item's columns are not contiguous and in
    order (the item would have been cut).
    """
    seen = defaultdict(list)
    cols = []
    for k, slots in enumerate(layout):
        col = []
        for p in slots.values():
            if p.kind == TALL:
                seen[p.item.id].append((k, p.offset, p.y, p.item))
            else:
                col += [Slice(o, p.y + dy, h) for o, dy, h in p.slices]
        cols.append(tuple(sorted(col, key=lambda s: (s.y, s.origin))))
    tall = []
    for iid, parts in seen.items():
        t = parts[0][3]
        xs = {k - off for k, off, _, _ in parts}
        ys = {y for _, _, y, _ in parts}
        if len(xs) != 1 or len(ys) != 1 or len(parts) != t.w:
            raise ReorderError(f"tall item {iid!r} was cut")
        tall.append(TallPlacement(iid, xs.pop() + x0, ys.pop(), t.w, t.h))
    return tall, cols


def container_runs(layout, x0=0):
    """Maximal runs of adjacent columns holding a piece of the same kind,
    bottom and height. Returns (tall boxes, sliced boxes)."""
    where = defaultdict(list)
    for k, slots in enumerate(layout):
        for p in slots.values():
            where[(p.kind, p.y, p.h)].append(k)
    tall, sliced = [], []
    for (kind, y, h), ks in sorted(where.items(), key=lambda kv: (kv[1][0], kv[0][1])):
        ks.sort()
        start = prev = ks[0]
        for k in ks[1:] + [None]:
            if k is not None and k == prev + 1:
                prev = k
                continue
            rect = Rect(start + x0, y, prev - start + 1, h)
            if kind == TALL:
                tall.append(Box(BoxKind.TALL_SUB, rect, h))
            else:
                sliced.append(Box(BoxKind.VERTICAL_SUB, rect))
            if k is not None:
                start = prev = k
    return tall, sliced


def static_layout(width, tall, slice_cols, B):
    """Pieces of an untouched region, as column slot dicts."""
    cols = form_pieces(tall, [[(s.origin, Fraction(s.y), Fraction(s.h)) for s in c] for c in slice_cols], B)
    return [{i: p for i, p in enumerate(col)} for col in cols]


def run_engine(tall, slice_cols, B, q):
    """Shift, fuse and reorder one region of height B; returns the layout."""
    tall2, cols = first_shift(tall, slice_cols, B, q)
    pieces = form_pieces(tall2, cols, B, full_threshold=B - q)
    check_columns(pieces, "first shift")
    second_shift(pieces, B, q)
    fuse(pieces, B, q)
    layout, _ = arrange(classify_columns(pieces, B, q))
    return layout
