"""Typed sub-areas of a packing."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..geometry import Rect


class BoxKind(str, enum.Enum):
    LARGE_ITEM = "LargeItem"
    HORIZONTAL = "Horizontal"
    TALL_VERTICAL = "TallVertical"
    TALL_SUB = "TallSub"
    VERTICAL_SUB = "VerticalSub"
    SMALL_EMPTY = "SmallEmpty"
    EXTRA_VERTICAL = "ExtraVertical"


@dataclass(frozen=True)
class Box:
    kind: BoxKind
    rect: Rect
    uniform_height: object = None

    def __post_init__(self):
        object.__setattr__(self, "kind", BoxKind(self.kind))
        if self.kind is BoxKind.TALL_SUB and self.uniform_height is None:
            raise ValueError("TallSub boxes need a uniform height")

    def shifted(self, dx=0, dy=0) -> "Box":
        return Box(self.kind, self.rect.shifted(dx, dy), self.uniform_height)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "x": self.rect.x, "y": self.rect.y, "w": self.rect.w, "h": self.rect.h}
        if self.uniform_height is not None:
            d["uniform_height"] = self.uniform_height
        return d

    @classmethod
    def from_dict(cls, d) -> "Box":
        return cls(BoxKind(d["kind"]), Rect(d["x"], d["y"], d["w"], d["h"]), d.get("uniform_height"))


@dataclass
class ContainerSet:
    tall_containers: list = field(default_factory=list)
    sliced_containers: list = field(default_factory=list)
    height: object = 0

    @property
    def boxes(self):
        return self.tall_containers + self.sliced_containers
