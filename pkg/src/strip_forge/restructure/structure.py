"""Box partitions of rounded packings and the structured packings built from them."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..classify import ItemClass, Params, classify
from ..core import Instance, Packing, Placement, ValidationReport, validate_packing
from ..geometry import Rect
from ..placement.vertical import PlacementError, place_vertical
from .boxes import Box, BoxKind
from .grid import Slice, TallPlacement
from .reorder import (
    BorderViolation,
    BoxContents,
    reorder_medium_box,
    reorder_small_box,
    reorder_tall_box,
)


class ConstructionFailed(RuntimeError):
    pass


class GapNotFound(RuntimeError):
    pass


LV = (ItemClass.LARGE, ItemClass.MEDIUM_VERTICAL)
TV = (ItemClass.TALL, ItemClass.VERTICAL)
PARTITION_KINDS = (BoxKind.LARGE_ITEM, BoxKind.HORIZONTAL, BoxKind.TALL_VERTICAL)


def _ceil_to(v, g):
    return g * math.ceil(Fraction(v) / g)


def _floor_to(v, g):
    return g * math.floor(Fraction(v) / g)


def _on_grid(v, g) -> bool:
    return (Fraction(v) / g).denominator == 1


@dataclass(frozen=True)
class RoundedPacking:
    """A packing of an instance whose heights are already rounded."""

    instance: Instance
    packing: Packing
    params: Params

    @property
    def grid(self) -> Fraction:
        p = self.params
        return p.epsilon * p.delta * p.T

    def classes(self) -> dict:
        W = self.instance.strip_width
        return {it.id: classify(it, self.params, W) for it in self.instance.items}

    def rects(self) -> dict:
        items = self.instance.by_id()
        out = {}
        for pl in self.packing.placements:
            w, h = items[pl.item_id].dims(pl.rotated)
            out[pl.item_id] = Rect(pl.x, pl.y, w, h)
        return out


def _params_to_dict(p: Params) -> dict:
    return {"epsilon": str(p.epsilon), "delta": str(p.delta), "mu": str(p.mu), "T": p.T,
            "f_exponent": p.f_exponent, "f_divisor": p.f_divisor, "N": p.N}


def _params_from_dict(d) -> Params:
    return Params(Fraction(d["epsilon"]), Fraction(d["delta"]), Fraction(d["mu"]), int(d["T"]),
                  int(d.get("f_exponent", 13)), int(d.get("f_divisor", 1)), d.get("N"))


@dataclass
class BoxPartition:
    width: int
    boxes: list
    params: Params | None = None

    def counts(self) -> Counter:
        return Counter(b.kind.value for b in self.boxes)

    def to_dict(self) -> dict:
        d = {"schema": "hint-v1", "width": self.width, "boxes": [_box_dict(b) for b in self.boxes]}
        if self.params is not None:
            d["params"] = _params_to_dict(self.params)
        return d

    @classmethod
    def from_dict(cls, d) -> "BoxPartition":
        if d.get("schema") != "hint-v1":
            raise ValueError("expected a hint-v1 document")
        p = _params_from_dict(d["params"]) if "params" in d else None
        return cls(int(d.get("width", 0)), [_box_from(b) for b in d["boxes"]], p)


def _num(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else str(v)


def _box_dict(b: Box) -> dict:
    d = {"kind": b.kind.value, "x": _num(b.rect.x), "y": _num(b.rect.y), "w": _num(b.rect.w), "h": _num(b.rect.h)}
    if b.uniform_height is not None:
        d["uniform_height"] = _num(b.uniform_height)
    return d


def _box_from(d) -> Box:
    r = Rect(*(Fraction(d[k]) for k in ("x", "y", "w", "h")))
    r = Rect(*(v.numerator if v.denominator == 1 else v for v in r.as_tuple()))
    uh = d.get("uniform_height")
    return Box(BoxKind(d["kind"]), r, None if uh is None else Fraction(uh))


# ---- checking ----------------------------------------------------------------

@dataclass(frozen=True)
class BoxOutside:
    box: int

    def __str__(self):
        return f"BoxOutside({self.box})"


@dataclass(frozen=True)
class BoxOverlap:
    a: int
    b: int

    def __str__(self):
        return f"BoxOverlap({self.a}, {self.b})"


@dataclass(frozen=True)
class OffGrid:
    box: int

    def __str__(self):
        return f"OffGrid({self.box})"


@dataclass(frozen=True)
class UnexpectedKind:
    box: int
    kind: str

    def __str__(self):
        return f"UnexpectedKind({self.box}, {self.kind})"


@dataclass(frozen=True)
class WrongContent:
    box: int
    item: str

    def __str__(self):
        return f"WrongContent({self.box}, {self.item})"


@dataclass(frozen=True)
class CrossesBorder:
    box: int
    item: str

    def __str__(self):
        return f"CrossesBorder({self.box}, {self.item})"


@dataclass(frozen=True)
class NotOneItem:
    box: int
    count: int

    def __str__(self):
        return f"NotOneItem({self.box}, {self.count})"


@dataclass(frozen=True)
class Uncovered:
    item: str

    def __str__(self):
        return f"Uncovered({self.item})"


@dataclass(frozen=True)
class TooManyBoxes:
    count: int
    cap: int

    def __str__(self):
        return f"TooManyBoxes({self.count} > {self.cap})"


def _cut(a: Rect, b: Rect):
    w = min(a.right, b.right) - max(a.x, b.x)
    h = min(a.top, b.top) - max(a.y, b.y)
    return w * h if w > 0 and h > 0 else 0


def check_partition(rp: RoundedPacking, partition: BoxPartition, cap=None) -> ValidationReport:
    """Report every way in which ``partition`` breaks the partition conditions.

    Small and medium items are not part of a partition and are ignored.
    """
    report = ValidationReport()
    v = report.violations
    W = rp.instance.strip_width
    g = rp.grid
    boxes = partition.boxes
    if cap is not None and len(boxes) > cap:
        v.append(TooManyBoxes(len(boxes), cap))
    for k, b in enumerate(boxes):
        r = b.rect
        if b.kind not in PARTITION_KINDS:
            v.append(UnexpectedKind(k, b.kind.value))
        if r.x < 0 or r.y < 0 or r.right > W or r.w <= 0 or r.h <= 0:
            v.append(BoxOutside(k))
        if not (_on_grid(r.y, g) and _on_grid(r.h, g)) or Fraction(r.x).denominator != 1 or Fraction(r.w).denominator != 1:
            v.append(OffGrid(k))
    for a in range(len(boxes)):
        for b in range(a + 1, len(boxes)):
            if boxes[a].rect.overlaps(boxes[b].rect):
                v.append(BoxOverlap(a, b))
    classes = rp.classes()
    rects = rp.rects()
    allowed = {BoxKind.LARGE_ITEM: LV, BoxKind.HORIZONTAL: (ItemClass.HORIZONTAL,), BoxKind.TALL_VERTICAL: TV}
    covered = Counter()
    for k, b in enumerate(boxes):
        inside = [i for i, r in rects.items() if classes[i] not in (ItemClass.SMALL, ItemClass.MEDIUM) and r.overlaps(b.rect)]
        for i in inside:
            if b.kind in allowed and classes[i] not in allowed[b.kind]:
                v.append(WrongContent(k, i))
                continue
            r = rects[i]
            if b.kind is BoxKind.HORIZONTAL and (r.x < b.rect.x or r.right > b.rect.right):
                v.append(CrossesBorder(k, i))
            if b.kind is BoxKind.TALL_VERTICAL and (r.y < b.rect.y or r.top > b.rect.top):
                v.append(CrossesBorder(k, i))
            if b.kind is BoxKind.LARGE_ITEM and not b.rect.contains(r):
                v.append(CrossesBorder(k, i))
            covered[i] += _cut(r, b.rect)
        if b.kind is BoxKind.LARGE_ITEM and len(inside) != 1:
            v.append(NotOneItem(k, len(inside)))
    for i, r in rects.items():
        if classes[i] in (ItemClass.SMALL, ItemClass.MEDIUM):
            continue
        if covered[i] != r.area:
            v.append(Uncovered(i))
    return report


# ---- construction ------------------------------------------------------------

def _components(rects, linked):
    """Union-find over rectangles; returns lists of indices."""
    parent = list(range(len(rects)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(rects)):
        for b in range(a + 1, len(rects)):
            if linked(rects[a], rects[b]):
                parent[find(a)] = find(b)
    out = {}
    for a in range(len(rects)):
        out.setdefault(find(a), []).append(a)
    return list(out.values())


def _bbox(rs, g):
    x0 = min(r.x for r in rs)
    x1 = max(r.right for r in rs)
    y0 = _floor_to(min(r.y for r in rs), g)
    y1 = _ceil_to(max(r.top for r in rs), g)
    return Rect(x0, y0, x1 - x0, y1 - y0)


def _touching(a: Rect, b: Rect) -> bool:
    return a.x < b.right and b.x < a.right and a.y <= b.top and b.y <= a.top


def _grouped_boxes(rects, g):
    """Bounding boxes of touching groups, merged until no two overlap."""
    boxes = [_bbox([rects[i] for i in comp], g) for comp in _components(rects, _touching)]
    while True:
        comps = _components(boxes, lambda a, b: a.overlaps(b))
        if len(comps) == len(boxes):
            return boxes
        boxes = [_bbox([boxes[i] for i in comp], g) for comp in comps]


def _as_int_rect(r: Rect) -> Rect:
    return Rect(*(Fraction(v).numerator if Fraction(v).denominator == 1 else Fraction(v) for v in r.as_tuple()))


def partition_into_boxes(rp: RoundedPacking, cap=None) -> BoxPartition:
    """Sweep a rounded packing into large, horizontal and tall/vertical boxes.

    Large and medium-vertical items get a box of their own size. Tall and
    vertical items that touch each other vertically and share columns end
    up in one box; likewise horizontal items. Raises ConstructionFailed if
    the result does not pass ``check_partition``.
    """
    g = rp.grid
    classes = rp.classes()
    rects = rp.rects()
    for i, r in rects.items():
        if classes[i] in LV + TV and not (_on_grid(r.y, g) and _on_grid(r.h, g)):
            raise ConstructionFailed(f"item {i!r} is not on the grid of pitch {g}")
    boxes = [Box(BoxKind.LARGE_ITEM, rects[i]) for i in sorted(rects) if classes[i] in LV]
    tv = [rects[i] for i in sorted(rects) if classes[i] in TV]
    hz = [rects[i] for i in sorted(rects) if classes[i] is ItemClass.HORIZONTAL]
    boxes += [Box(BoxKind.TALL_VERTICAL, _as_int_rect(r)) for r in _grouped_boxes(tv, g)]
    boxes += [Box(BoxKind.HORIZONTAL, _as_int_rect(r)) for r in _grouped_boxes(hz, g)]
    part = BoxPartition(rp.instance.strip_width, boxes, rp.params)
    rep = check_partition(rp, part, cap)
    if not rep.ok:
        raise ConstructionFailed(f"sweep partition rejected: {rep}")
    return part


# ---- the structured packing ------------------------------------------------------

@dataclass
class StructuredPacking:
    """Rounded items placed inside typed boxes of a W x height area."""

    instance: Instance
    params: Params
    boxes: list
    positions: dict  # id -> (x, y)
    extension: Fraction = Fraction(0)
    notes: list = field(default_factory=list)

    @property
    def width(self):
        return self.instance.strip_width

    @property
    def height(self):
        items = self.instance.by_id()
        tops = [y + items[i].height for i, (_, y) in self.positions.items()]
        return max(tops, default=0)

    @property
    def bound(self) -> Fraction:
        p = self.params
        return (Fraction(5, 4) + 5 * p.epsilon) * p.T

    def counts(self) -> Counter:
        return Counter(b.kind.value for b in self.boxes)

    def packing(self) -> Packing:
        pl = [Placement(i, int(x), int(y)) for i, (x, y) in sorted(self.positions.items())]
        return Packing.build(self.instance, pl)

    def validate(self) -> ValidationReport:
        return validate_packing(self.instance, self.packing())

    def to_partition(self) -> BoxPartition:
        return BoxPartition(self.width, list(self.boxes), self.params)


def _find_gap(w, h, occupied, W, limit, g):
    """Lowest, then leftmost, grid-aligned spot for a w x h box."""
    if w > W:
        return None
    ys = sorted({Fraction(0)} | {_ceil_to(r.top, g) for r in occupied})
    xs = sorted({0} | {r.right for r in occupied if r.right + w <= W} | {r.x - w for r in occupied if r.x - w >= 0})
    for y in ys:
        if y + h > limit:
            break
        for x in xs:
            if x + w > W:
                continue
            cand = Rect(x, y, w, h)
            if not any(cand.overlaps(r) for r in occupied):
                return cand
    return None


def _local_contents(box: Rect, members, rects, classes):
    tall, cols = [], [[] for _ in range(int(box.w))]
    for i in members:
        r = rects[i]
        x, y = r.x - box.x, Fraction(r.y - box.y)
        if classes[i] is ItemClass.TALL:
            tall.append(TallPlacement(i, int(x), y, int(r.w), Fraction(r.h)))
        else:
            for c in range(int(x), int(x + r.w)):
                cols[c].append(Slice(i, y, Fraction(r.h)))
    cols = tuple(tuple(sorted(c, key=lambda s: (s.y, s.origin))) for c in cols)
    return BoxContents(int(box.w), Fraction(box.h), tuple(tall), cols)


def _intify(v):
    v = Fraction(v)
    if v.denominator != 1:
        raise ConstructionFailed(f"coordinate {v} is not integral; choose T so that H/4 and eps*delta*T/2 are integers")
    return v.numerator


def build_structure(rp: RoundedPacking, partition: BoxPartition | None = None) -> StructuredPacking:
    """Rearrange a partitioned rounded packing into uniform-height sub-boxes.

    Boxes starting at or above 3H/4 move up by H/4 (rounded up to the grid)
    to make room for the extension of the boxes taller than 3H/4. Each
    tall/vertical box is reordered according to its height, vertical items
    are placed integrally by the configuration LP, and every extra box is
    put into a free, grid-aligned spot below (5/4 + 5 eps) T.
    """
    p = rp.params
    W = rp.instance.strip_width
    H = (1 + 2 * p.epsilon) * p.T
    q = H / 4
    g = rp.grid
    if partition is None:
        partition = partition_into_boxes(rp)
    rep = check_partition(rp, partition)
    if not rep.ok:
        raise ValueError(f"partition is invalid: {rep}")
    classes = rp.classes()
    rects = rp.rects()
    limit = (Fraction(5, 4) + 5 * p.epsilon) * p.T

    owner = {}
    for i, r in rects.items():
        if classes[i] in (ItemClass.SMALL, ItemClass.MEDIUM):
            raise ValueError(f"item {i!r} is small or medium; remove those first")
        homes = [k for k, b in enumerate(partition.boxes) if b.rect.contains(r)]
        if not homes:
            raise ConstructionFailed(f"item {i!r} crosses a box border")
        owner[i] = homes[0]
    members = {k: [] for k in range(len(partition.boxes))}
    for i, k in owner.items():
        members[k].append(i)

    tall_boxes = [b for b in partition.boxes if b.kind is BoxKind.TALL_VERTICAL and b.rect.h > 3 * q]
    shift = _ceil_to(q, g) if tall_boxes else Fraction(0)
    moved = [b.rect.shifted(0, shift) if b.rect.y >= 3 * q else b.rect for b in partition.boxes]

    positions, out_boxes, pseudo, pending, notes = {}, [], [], [], []
    for k, b in enumerate(partition.boxes):
        r = moved[k]
        dy = r.y - b.rect.y
        if b.kind is not BoxKind.TALL_VERTICAL:
            out_boxes.append(Box(b.kind, r))
            for i in members[k]:
                positions[i] = (rects[i].x, rects[i].y + dy)
            continue
        contents = _local_contents(b.rect, members[k], rects, classes)
        try:
            if b.rect.h > 3 * q:
                res = reorder_tall_box(contents, H, p.N, unmovables=())
            elif b.rect.h > 2 * q:
                res, extra = reorder_medium_box(contents, H, p.N)
                if extra is not None:
                    pending.append((extra.w, Fraction(extra.h)))
            else:
                res = reorder_small_box(contents, H, p.N)
        except BorderViolation as e:
            raise ConstructionFailed(str(e)) from e
        for t in res.contents.tall:
            positions[t.id] = (r.x + t.x, r.y + t.y)
        for sb in res.boxes:
            gb = sb.shifted(r.x, r.y)
            if sb.kind is BoxKind.TALL_SUB:
                out_boxes.append(gb)
            else:
                pseudo.append(gb.rect)

    def occupied():
        occ = [bx.rect for bx in out_boxes] + list(pseudo)
        return occ

    for w, h in pending:
        spot = _find_gap(w, h, occupied(), W, limit, g)
        if spot is None:
            raise GapNotFound(f"no gap for a {w} x {h} box of removed pseudo items")
        pseudo.append(spot)
        out_boxes.append(Box(BoxKind.EXTRA_VERTICAL, spot))
        notes.append(f"pseudo extra box at {spot.as_tuple()}")

    verticals = [(i, rects[i].w, rects[i].h) for i in sorted(rects) if classes[i] is ItemClass.VERTICAL]
    if verticals:
        try:
            vp = place_vertical(pseudo, verticals, math.floor(q), max(1, math.floor(p.mu * W)))
        except PlacementError as e:
            raise ConstructionFailed(str(e)) from e
        positions.update(vp.positions)
        for sb in vp.sub_boxes:
            if sb.rect.w > 0:
                out_boxes.append(Box(BoxKind.VERTICAL_SUB, sb.rect, sb.uniform_height))
        for e in vp.empty_boxes:
            if e.w > 0 and e.h > 0:
                out_boxes.append(Box(BoxKind.SMALL_EMPTY, e))
        for ex in vp.extra_boxes:
            spot = _find_gap(ex.w, ex.h, occupied(), W, limit, g)
            if spot is None:
                raise GapNotFound(f"no gap for an extra {ex.w} x {ex.h} box of vertical items")
            out_boxes.append(Box(BoxKind.EXTRA_VERTICAL, spot))
            heights = dict((i, h) for i, _, h in verticals)
            for iid, dx, dy in ex.contents:
                positions[iid] = (spot.x + dx, spot.y + dy)
                out_boxes.append(Box(BoxKind.VERTICAL_SUB, Rect(spot.x, spot.y + dy, ex.w, heights[iid]), heights[iid]))
    else:
        for e in pseudo:
            out_boxes.append(Box(BoxKind.SMALL_EMPTY, e))

    positions = {i: (_intify(x), _intify(y)) for i, (x, y) in positions.items()}
    boxes = [Box(b.kind, _as_int_rect(b.rect), b.uniform_height) for b in out_boxes]
    sp = StructuredPacking(rp.instance, p, boxes, positions, shift, notes)
    missing = set(rects) - set(positions)
    if missing:
        raise ConstructionFailed(f"items lost during restructuring: {sorted(missing)[:5]}")
    return sp


@dataclass(frozen=True)
class WrongHeight:
    box: int
    item: str

    def __str__(self):
        return f"WrongHeight({self.box}, {self.item})"


@dataclass(frozen=True)
class NoHome:
    item: str

    def __str__(self):
        return f"NoHome({self.item})"


@dataclass(frozen=True)
class TooHigh:
    height: object
    bound: object

    def __str__(self):
        return f"TooHigh({self.height} > {self.bound})"


def check_structure(sp: StructuredPacking, grid=None) -> ValidationReport:
    """Packing validity, height bound, item homes and box geometry.

    ExtraVertical boxes are frames around VerticalSub boxes and are only
    checked against the other kinds.
    """
    report = sp.validate()
    v = report.violations
    if sp.height > sp.bound:
        v.append(TooHigh(sp.height, sp.bound))
    p = sp.params
    g = grid if grid is not None else p.epsilon * p.delta * p.T
    W = sp.width
    items = sp.instance.by_id()
    classes = {i: classify(it, p, W) for i, it in items.items()}
    home_kind = {ItemClass.LARGE: BoxKind.LARGE_ITEM, ItemClass.MEDIUM_VERTICAL: BoxKind.LARGE_ITEM,
                 ItemClass.TALL: BoxKind.TALL_SUB, ItemClass.VERTICAL: BoxKind.VERTICAL_SUB,
                 ItemClass.HORIZONTAL: BoxKind.HORIZONTAL}
    rects = {i: Rect(x, y, items[i].width, items[i].height) for i, (x, y) in sp.positions.items()}
    for k, b in enumerate(sp.boxes):
        r = b.rect
        if r.x < 0 or r.y < 0 or r.right > W:
            v.append(BoxOutside(k))
        if not (_on_grid(r.y, g) and _on_grid(r.h, g)):
            v.append(OffGrid(k))
    for i, r in rects.items():
        want = home_kind.get(classes[i])
        if want is None:
            continue
        homes = [k for k, b in enumerate(sp.boxes) if b.kind is want and b.rect.contains(r)]
        if not homes:
            v.append(NoHome(i))
            continue
        b = sp.boxes[homes[0]]
        if want in (BoxKind.TALL_SUB, BoxKind.VERTICAL_SUB) and b.uniform_height != items[i].height:
            v.append(WrongHeight(homes[0], i))
    solid = [k for k, b in enumerate(sp.boxes) if b.kind is not BoxKind.EXTRA_VERTICAL]
    for a in range(len(solid)):
        for b in range(a + 1, len(solid)):
            if sp.boxes[solid[a]].rect.overlaps(sp.boxes[solid[b]].rect):
                v.append(BoxOverlap(solid[a], solid[b]))
    for k, b in enumerate(sp.boxes):
        kinds = {BoxKind.LARGE_ITEM: LV, BoxKind.TALL_SUB: (ItemClass.TALL,), BoxKind.VERTICAL_SUB: (ItemClass.VERTICAL,),
                 BoxKind.HORIZONTAL: (ItemClass.HORIZONTAL,), BoxKind.SMALL_EMPTY: ()}
        if b.kind not in kinds:
            continue
        for i, r in rects.items():
            if r.overlaps(b.rect) and classes[i] not in kinds[b.kind]:
                v.append(WrongContent(k, i))
    return report
