"""Axis-parallel rectangles with exact (int or Fraction) coordinates."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Rect:
    x: object
    y: object
    w: object
    h: object

    @property
    def top(self):
        return self.y + self.h

    @property
    def right(self):
        return self.x + self.w

    @property
    def area(self):
        return self.w * self.h

    def overlaps(self, o: "Rect") -> bool:
        return self.x < o.right and o.x < self.right and self.y < o.top and o.y < self.top

    def contains(self, o: "Rect") -> bool:
        return self.x <= o.x and o.right <= self.right and self.y <= o.y and o.top <= self.top

    def shifted(self, dx=0, dy=0) -> "Rect":
        return Rect(self.x + dx, self.y + dy, self.w, self.h)

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)


@dataclass
class ExtraBox:
    """An unplaced box and the items inside it, positioned relative to its corner."""

    w: int
    h: int
    contents: list  # (item id, dx, dy)
    kind: str = "ExtraVertical"
