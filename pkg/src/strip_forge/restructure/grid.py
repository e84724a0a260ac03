"""Grid packings: tall items whole, everything else cut into unit columns."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from ..core import validate_packing


class AlignmentError(ValueError):
    def __init__(self, item_id, detail=""):
        super().__init__(f"tall item {item_id!r} is not on the grid{': ' + detail if detail else ''}")
        self.item_id = item_id


@dataclass(frozen=True)
class TallPlacement:
    id: str
    x: int
    y: Fraction
    w: int
    h: Fraction

    @property
    def top(self):
        return self.y + self.h

    @property
    def right(self):
        return self.x + self.w


@dataclass(frozen=True)
class Slice:
    origin: str
    y: Fraction
    h: Fraction

    @property
    def top(self):
        return self.y + self.h


@dataclass(frozen=True)
class GridPacking:
    """Tall items with placements plus per-column stacks of unit slices."""

    strip_width: int
    H: int
    N: int
    tall: tuple
    columns: tuple  # columns[c] = tuple of Slice

    @property
    def height(self):
        tops = [t.top for t in self.tall]
        tops += [s.top for col in self.columns for s in col]
        return max(tops, default=0)

    @property
    def pitch(self) -> Fraction:
        return Fraction(self.H, self.N)

    def slice_count(self) -> int:
        return sum(len(c) for c in self.columns)

    def slice_totals(self) -> dict:
        """origin -> total sliced height (over all columns)."""
        out = defaultdict(Fraction)
        for col in self.columns:
            for s in col:
                out[s.origin] += s.h
        return dict(out)

    def column_totals(self) -> list:
        """Per column: origin -> sliced height in that column (as a sorted tuple)."""
        res = []
        for col in self.columns:
            d = defaultdict(Fraction)
            for s in col:
                d[s.origin] += s.h
            res.append(tuple(sorted(d.items())))
        return res

    def overlaps(self) -> list:
        """Pairs of overlapping pieces, checked column by column."""
        bad = []
        occ = [[] for _ in range(self.strip_width)]
        for t in self.tall:
            if t.x < 0 or t.right > self.strip_width:
                bad.append((t.id, "outside"))
                continue
            for c in range(t.x, t.right):
                occ[c].append((t.y, t.top, t.id))
        for c, col in enumerate(self.columns):
            for s in col:
                occ[c].append((s.y, s.top, s.origin))
        for c, iv in enumerate(occ):
            iv.sort()
            for (a0, a1, ai), (b0, b1, bi) in zip(iv, iv[1:]):
                if b0 < a1:
                    bad.append((c, ai, bi))
        return bad


def grid_resolution(H, tall) -> int:
    """Coarsest N such that H/N divides H and every tall y and height."""
    g = H
    for t in tall:
        g = math.gcd(g, int(t.y), int(t.h))
    if g <= 0:
        raise ValueError("degenerate grid")
    return H // g


def make_grid_packing(instance, packing, H, N=None) -> GridPacking:
    """Slice every item of height <= H/4 into unit columns.

    Tall items (height > H/4) keep their placement and must start and end on
    multiples of H/N. With ``N=None`` the coarsest admissible grid is used.
    """
    rep = validate_packing(instance, packing)
    if not rep.ok:
        raise ValueError(f"packing is invalid: {rep.kinds()}")
    if packing.height > H:
        raise ValueError(f"packing height {packing.height} exceeds H={H}")
    items = instance.by_id()
    tall, rest = [], []
    for pl in packing.placements:
        it = items[pl.item_id]
        (tall if 4 * it.height > H else rest).append((it, pl))
    if N is None:
        N = grid_resolution(H, [TallPlacement(it.id, pl.x, pl.y, it.width, it.height) for it, pl in tall])
    if N <= 0 or H % N:
        raise ValueError(f"N={N} must divide H={H}")
    pitch = H // N
    out = []
    for it, pl in tall:
        if pl.y % pitch or (pl.y + it.height) % pitch:
            raise AlignmentError(it.id, f"y={pl.y}, h={it.height}, pitch={pitch}")
        out.append(TallPlacement(it.id, pl.x, Fraction(pl.y), it.width, Fraction(it.height)))
    cols = [[] for _ in range(instance.strip_width)]
    for it, pl in rest:
        for c in range(pl.x, pl.x + it.width):
            cols[c].append(Slice(it.id, Fraction(pl.y), Fraction(it.height)))
    return GridPacking(
        instance.strip_width, H, N,
        tuple(sorted(out, key=lambda t: (t.x, t.y, t.id))),
        tuple(tuple(sorted(c, key=lambda s: (s.y, s.origin))) for c in cols),
    )
