"""Instances, packings, the validator and the trivial bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Item:
    id: str
    width: int
    height: int

    def __post_init__(self):
        if not (isinstance(self.width, int) and isinstance(self.height, int)):
            raise TypeError(f"item {self.id!r}: dimensions must be integers")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"item {self.id!r}: width and height must be >= 1")

    @property
    def area(self) -> int:
        return self.width * self.height

    def dims(self, rotated: bool = False) -> tuple[int, int]:
        return (self.height, self.width) if rotated else (self.width, self.height)


@dataclass(frozen=True)
class Instance:
    strip_width: int
    items: tuple[Item, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not isinstance(self.strip_width, int) or self.strip_width < 1:
            raise ValueError("strip width must be a positive integer")
        seen = set()
        for it in self.items:
            if it.id in seen:
                raise ValueError(f"duplicate item id {it.id!r}")
            seen.add(it.id)
            if it.width > self.strip_width:
                raise ValueError(f"item {it.id!r} is wider than the strip")

    @classmethod
    def from_dims(cls, W: int, dims: Iterable[Sequence[int]]) -> "Instance":
        """Build an instance from (width, height) pairs; ids are 0, 1, 2, ..."""
        return cls(W, tuple(Item(str(i), int(w), int(h)) for i, (w, h) in enumerate(dims)))

    def __len__(self):
        return len(self.items)

    def by_id(self) -> dict[str, Item]:
        return {it.id: it for it in self.items}


@dataclass(frozen=True)
class Placement:
    item_id: str
    x: int
    y: int
    rotated: bool = False


@dataclass(frozen=True)
class Packing:
    placements: tuple[Placement, ...]
    height: int

    @classmethod
    def build(cls, instance: Instance, placements: Iterable[Placement]) -> "Packing":
        pl = tuple(placements)
        items = instance.by_id()
        h = 0
        for p in pl:
            it = items[p.item_id]
            h = max(h, p.y + it.dims(p.rotated)[1])
        return cls(pl, h)

    def position(self) -> dict[str, Placement]:
        return {p.item_id: p for p in self.placements}


# ---- violations -----------------------------------------------------------

@dataclass(frozen=True)
class Overlap:
    a: str
    b: str

    def __str__(self):
        return f"Overlap({self.a}, {self.b})"


@dataclass(frozen=True)
class OutOfBounds:
    id: str

    def __str__(self):
        return f"OutOfBounds({self.id})"


@dataclass(frozen=True)
class Missing:
    id: str

    def __str__(self):
        return f"Missing({self.id})"


@dataclass(frozen=True)
class Duplicate:
    id: str

    def __str__(self):
        return f"Duplicate({self.id})"


@dataclass(frozen=True)
class UnknownItem:
    id: str

    def __str__(self):
        return f"UnknownItem({self.id})"


@dataclass(frozen=True)
class RotationNotAllowed:
    id: str

    def __str__(self):
        return f"RotationNotAllowed({self.id})"


@dataclass(frozen=True)
class HeightMismatch:
    cached: int
    actual: int

    def __str__(self):
        return f"HeightMismatch(cached={self.cached}, actual={self.actual})"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def kinds(self) -> set[str]:
        return {type(v).__name__ for v in self.violations}

    def __str__(self):
        return "ok" if self.ok else "; ".join(map(str, self.violations))


def rects_overlap(a, b) -> bool:
    """Open-rectangle intersection of (x, y, w, h) tuples; shared edges are fine."""
    return a[0] < b[0] + b[2] and b[0] < a[0] + a[2] and a[1] < b[1] + b[3] and b[1] < a[1] + a[3]


def find_overlaps(rects: Sequence[tuple]) -> list[tuple[int, int]]:
    """Index pairs (i < j) of overlapping rectangles, by a sweep over x."""
    order = sorted(range(len(rects)), key=lambda i: rects[i][0])
    out = []
    active: list[int] = []
    for i in order:
        x = rects[i][0]
        active = [j for j in active if rects[j][0] + rects[j][2] > x]
        for j in active:
            if rects_overlap(rects[i], rects[j]):
                out.append((min(i, j), max(i, j)))
        if rects[i][2] > 0 and rects[i][3] > 0:
            active.append(i)
    return sorted(out)


def validate_packing(instance: Instance, packing: Packing, allow_rotation: bool = False) -> ValidationReport:
    report = ValidationReport()
    v = report.violations
    items = instance.by_id()
    W = instance.strip_width
    seen: set[str] = set()
    rects, ids = [], []
    actual = 0
    for p in packing.placements:
        if p.item_id not in items:
            v.append(UnknownItem(p.item_id))
            continue
        if p.item_id in seen:
            v.append(Duplicate(p.item_id))
            continue
        seen.add(p.item_id)
        if p.rotated and not allow_rotation:
            v.append(RotationNotAllowed(p.item_id))
        w, h = items[p.item_id].dims(p.rotated)
        if p.x < 0 or p.y < 0 or p.x + w > W:
            v.append(OutOfBounds(p.item_id))
        rects.append((p.x, p.y, w, h))
        ids.append(p.item_id)
        actual = max(actual, p.y + h)
    for it in instance.items:
        if it.id not in seen:
            v.append(Missing(it.id))
    for i, j in find_overlaps(rects):
        v.append(Overlap(ids[i], ids[j]))
    if packing.height != actual:
        v.append(HeightMismatch(packing.height, actual))
    return report


def packing_height(packing: Packing, instance: Instance | None = None) -> int:
    """Recompute the height; without an instance the cached value is used."""
    if instance is None:
        return packing.height if packing.placements else 0
    items = instance.by_id()
    return max((p.y + items[p.item_id].dims(p.rotated)[1] for p in packing.placements), default=0)


def total_area(items: Iterable[Item]) -> int:
    return sum(it.width * it.height for it in items)


def lower_bound(instance: Instance) -> int:
    if not instance.items:
        return 0
    W = instance.strip_width
    area = total_area(instance.items)
    return max(-(-area // W), max(it.height for it in instance.items))
