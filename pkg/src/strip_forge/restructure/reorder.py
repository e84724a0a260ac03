"""Shifting-and-reordering transforms on grid packings and single boxes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..geometry import ExtraBox, Rect
from . import _columns as E
from .boxes import Box, BoxKind, ContainerSet
from .grid import GridPacking, Slice, TallPlacement


class BorderViolation(ValueError):
    pass


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class BoxContents:
    """Items of one box in box-local coordinates.

    Tall items may stick out of the box sideways (those are unmovable);
    slices live in the box's unit columns.
    """

    width: int
    height: Fraction
    tall: tuple = ()
    columns: tuple = ()

    def __post_init__(self):
        if not self.columns:
            object.__setattr__(self, "columns", tuple(() for _ in range(self.width)))
        if len(self.columns) != self.width:
            raise ValueError("one slice column per unit of width expected")

    @classmethod
    def from_grid(cls, gp: GridPacking, height=None):
        return cls(gp.strip_width, Fraction(height if height is not None else gp.H), gp.tall, gp.columns)

    def crossing(self):
        return [t for t in self.tall if t.x < 0 or t.right > self.width]

    def slice_multiset(self):
        return sorted((s.origin, s.h) for col in self.columns for s in col)

    def overlaps(self):
        gp = GridPacking(self.width, 1, 1, (), self.columns)
        bad = list(gp.overlaps())
        occ = [[] for _ in range(self.width)]
        for t in self.tall:
            for c in range(max(t.x, 0), min(t.right, self.width)):
                occ[c].append((t.y, t.top, t.id))
        for c, col in enumerate(self.columns):
            occ[c] += [(s.y, s.top, s.origin) for s in col]
        for c, iv in enumerate(occ):
            iv.sort()
            for (a0, a1, ai), (b0, b1, bi) in zip(iv, iv[1:]):
                if b0 < a1:
                    bad.append((c, ai, bi))
        return bad


@dataclass
class ReorderResult:
    boxes: list
    contents: BoxContents
    extension: Fraction = Fraction(0)
    extra: ExtraBox | None = None
    frozen_columns: int = 0

    @property
    def tall_boxes(self):
        return [b for b in self.boxes if b.kind is BoxKind.TALL_SUB]

    @property
    def vertical_boxes(self):
        return [b for b in self.boxes if b.kind is BoxKind.VERTICAL_SUB]

    def __iter__(self):
        return iter(self.boxes)

    def __len__(self):
        return len(self.boxes)


def _slice_lists(columns):
    return [[(s.origin, Fraction(s.y), Fraction(s.h)) for s in col] for col in columns]


# ---- the simplified case ----------------------------------------------------

def simple_reorder(gp: GridPacking):
    """Reorder a grid packing of height H into one of height <= 5H/4 where
    equal-height tall items sit side by side in few containers."""
    bad = gp.overlaps()
    if bad:
        raise ValueError(f"grid packing overlaps: {bad[:3]}")
    H = Fraction(gp.H)
    layout = E.run_engine(list(gp.tall), _slice_lists(gp.columns), H, H / 4)
    tall, cols = E.emit(layout)
    out = GridPacking(gp.strip_width, gp.H, gp.N, tuple(sorted(tall, key=lambda t: (t.x, t.y))), tuple(cols))
    tb, sb = E.container_runs(layout)
    return ContainerSet(tb, sb, out.height), out


# ---- boxes taller than 3H/4 -------------------------------------------------

def _frozen_closure(width, tall, pinned):
    """Columns that must stay put: those of pinned items and, transitively,
    of every tall item sharing a column with them."""
    frozen = set()
    ids = set(pinned)
    for t in tall:
        if t.id in ids:
            frozen.update(range(max(t.x, 0), min(t.right, width)))
    changed = True
    while changed:
        changed = False
        for t in tall:
            if t.id in ids:
                continue
            span = range(max(t.x, 0), min(t.right, width))
            if any(c in frozen for c in span):
                ids.add(t.id)
                frozen.update(span)
                changed = True
    return ids, frozen


def _segments(width, frozen):
    segs, start = [], None
    for c in range(width + 1):
        free = c < width and c not in frozen
        if free and start is None:
            start = c
        elif not free and start is not None:
            segs.append((start, c))
            start = None
    return segs


def _sub(box, lo, hi):
    tall = [replace(t, x=t.x - lo) for t in box.tall if t.x >= lo and t.right <= hi]
    return tall, _slice_lists(box.columns[lo:hi])


def _check_unmovables(box, H, unmovables, max_per_side):
    crossing = box.crossing()
    ids = set(unmovables if unmovables is not None else [t.id for t in crossing])
    by_id = {t.id: t for t in box.tall}
    for uid in ids:
        if uid not in by_id:
            raise ValueError(f"unknown unmovable {uid!r}")
    for t in crossing:
        if t.id not in ids:
            raise BorderViolation(f"tall item {t.id!r} crosses the box border but is not unmovable")
    left = [i for i in ids if by_id[i].x < 0]
    right = [i for i in ids if by_id[i].right > box.width]
    if len(left) > max_per_side or len(right) > max_per_side:
        raise BorderViolation("too many unmovable items on one side")
    return ids, crossing


def reorder_tall_box(box: BoxContents, H, N, unmovables=None) -> ReorderResult:
    """Reorder a box of height > 3H/4 using at most H/4 of extra height.

    Unmovable items (default: all tall items crossing a side border) keep
    their coordinates. Columns they occupy, and columns of tall items
    chained to them through shared columns, are left as they are; the
    remaining middle part goes through the shifting and sorting steps.
    """
    H = Fraction(H)
    q = H / 4
    B = Fraction(box.height)
    if not B > 3 * q:
        raise ValueError(f"box height {B} is not above 3H/4")
    ids, crossing = _check_unmovables(box, H, unmovables, 3)
    for t in crossing:
        if t.top > B - q:
            raise BorderViolation(f"tall item {t.id!r} crosses a side border above h(B)-H/4")
    for t in box.tall:
        if 4 * t.h <= H:
            raise ValueError(f"item {t.id!r} is not tall")
    pinned, frozen = _frozen_closure(box.width, box.tall, ids)
    segs = _segments(box.width, frozen)
    boxes, new_tall, new_cols = [], [], [None] * box.width
    static = E.static_layout(box.width, [t for t in box.tall if t.id in pinned],
                             [box.columns[c] if c in frozen else () for c in range(box.width)], B)
    for c in frozen:
        new_cols[c] = box.columns[c]
    new_tall += [t for t in box.tall if t.id in pinned]
    fl = [static[c] if c in frozen else {} for c in range(box.width)]
    tb, sb = E.container_runs(fl)
    boxes += tb + sb
    for lo, hi in segs:
        tall, cols = _sub(box, lo, hi)
        layout = E.run_engine(tall, cols, B, q)
        t2, c2 = E.emit(layout, x0=lo)
        new_tall += t2
        for k, col in enumerate(c2):
            new_cols[lo + k] = col
        tb, sb = E.container_runs(layout, x0=lo)
        boxes += tb + sb
    ext = q if segs else Fraction(0)
    contents = BoxContents(box.width, B + ext, tuple(new_tall), tuple(tuple(c) for c in new_cols))
    return ReorderResult(boxes, contents, ext, None, len(frozen))


# ---- lower boxes -------------------------------------------------------------

def _two_sided(width, tall, cols, B):
    """Columns of a region whose pieces all touch its bottom or top: slot
    dicts with keys 'bot' and 'top'. A full-height pseudo piece counts as
    touching the bottom."""
    pieces = E.form_pieces(tall, cols, B)
    out = []
    for c, col in enumerate(pieces):
        slots = {}
        for p in col:
            if p.y == 0:
                a = "bot"
            elif p.top == B:
                a = "top"
            else:
                raise ShapeError(f"column {c}: piece at {p.y}+{p.h} touches neither border")
            if a in slots:
                raise ShapeError(f"column {c}: two pieces touching the same border")
            slots[a] = p
        out.append(slots)
    return out


def _sort_two_sided(layout, lo, hi):
    E._resort(layout, lo, hi, "bot", True)
    E._resort(layout, lo, hi, "top", False)


def two_shelf_reorder(region: BoxContents, unmovables=()) -> ReorderResult:
    """Sort a region whose items each touch its bottom or its top.

    Bottom pieces go in descending, top pieces in ascending order of height.
    Columns of unmovable items, and of items sharing columns with them, stay
    where they are; each free stretch between them is sorted on its own.
    """
    B = Fraction(region.height)
    by_id = {t.id: t for t in region.tall}
    for t in region.tall:
        if t.y != 0 and t.top != B:
            raise ShapeError(f"tall item {t.id!r} touches neither border")
    ids, _ = _check_unmovables(region, None, list(unmovables) or None, 2)
    pinned, frozen = _frozen_closure(region.width, region.tall, ids)
    layout = _two_sided(region.width, region.tall, _slice_lists(region.columns), B)
    for lo, hi in _segments(region.width, frozen):
        _sort_two_sided(layout, lo, hi)
    movable = [d if c not in frozen else {k: p for k, p in d.items() if not (p.kind == E.TALL and p.item.id in pinned)}
               for c, d in enumerate(layout)]
    tall, cols = E.emit(movable)
    tall += [by_id[i] for i in pinned]
    tb, sb = E.container_runs(layout)
    contents = BoxContents(region.width, B, tuple(tall), tuple(cols))
    return ReorderResult(tb + sb, contents, Fraction(0), None, len(frozen))


def _ffd_columns(stacks, cap):
    """Pack unit-width stacks (height, slices) into as few columns of height
    cap as first-fit decreasing finds."""
    bins = []
    for h, sl in sorted(stacks, key=lambda s: -s[0]):
        for b in bins:
            if b[0] + h <= cap:
                b[1].extend((o, b[0] + dy, hh) for o, dy, hh in sl)
                b[0] += h
                break
        else:
            bins.append([h, [(o, dy, hh) for o, dy, hh in sl]])
    return bins


def reorder_medium_box(box: BoxContents, H, N):
    """Boxes with H/2 < h(B) <= 3H/4: tall items to the top or the bottom,
    pseudo items caught between two tall items into one extra box of height
    H/4. Returns (ReorderResult, ExtraBox or None)."""
    H = Fraction(H)
    q = H / 4
    B = Fraction(box.height)
    if not (H / 2 < B <= 3 * q):
        raise ValueError(f"box height {B} not in (H/2, 3H/4]")
    if box.crossing():
        raise BorderViolation("medium boxes take no unmovable items")
    tall, cols = E.first_shift(list(box.tall), _slice_lists(box.columns), B, q)
    pieces = E.form_pieces(tall, cols, B)
    between = []
    for c, col in enumerate(pieces):
        ts = [p for p in col if p.kind == E.TALL]
        for p in list(col):
            if p.kind == E.PSEUDO and p.y > 0 and p.top < B:
                if not (any(t.top == p.y for t in ts) and any(t.y == p.top for t in ts)):
                    raise E.ReorderError(f"column {c}: loose pseudo item")
                between.append((p.h, p.slices))
                col.remove(p)
    E.check_columns(pieces, "medium shift")
    layout = []
    for c, col in enumerate(pieces):
        slots = {}
        for p in col:
            a = "bot" if p.y == 0 else "top"
            if p.y != 0 and p.top != B or a in slots:
                raise E.ReorderError(f"column {c}: unexpected piece")
            slots[a] = p
        layout.append(slots)
    _sort_two_sided(layout, 0, box.width)
    t2, c2 = E.emit(layout)
    tb, sb = E.container_runs(layout)
    extra = None
    if between:
        bins = _ffd_columns(between, q)
        extra = ExtraBox(len(bins), q, [(o, k, dy, h) for k, (_, sl) in enumerate(bins) for o, dy, h in sl])
    contents = BoxContents(box.width, B, tuple(t2), tuple(c2))
    return ReorderResult(tb + sb, contents, Fraction(0), extra), extra


def reorder_small_box(box: BoxContents, H, N) -> ReorderResult:
    """Boxes with h(B) <= H/2: every tall item drops to the bottom, then
    the columns are sorted by the height of their tall item."""
    H = Fraction(H)
    q = H / 4
    B = Fraction(box.height)
    if not (0 < B <= H / 2):
        raise ValueError(f"box height {B} not in (0, H/2]")
    if box.crossing():
        raise BorderViolation("small boxes take no unmovable items")
    tall, cols = E.first_shift(list(box.tall), _slice_lists(box.columns), B, q)
    for t in tall:
        if t.y != 0:
            raise E.ReorderError(f"tall item {t.id!r} did not reach the bottom")
    layout = _two_sided(box.width, tall, cols, B)
    _sort_two_sided(layout, 0, box.width)
    t2, c2 = E.emit(layout)
    tb, sb = E.container_runs(layout)
    return ReorderResult(tb + sb, BoxContents(box.width, B, tuple(t2), tuple(c2)))
