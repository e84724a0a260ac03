"""Exact minimum-height packing for small instances."""

from __future__ import annotations

from dataclasses import dataclass

from .._search import BudgetExhausted, fits_in_box
from ..baselines import nfdh
from ..core import Instance, Packing, Placement, total_area


class LimitExceeded(Exception):
    pass


@dataclass(frozen=True)
class OracleLimits:
    n_max: int = 10
    W_max: int = 24
    H_max: int = 120
    node_limit: int = 5_000_000


def exact_oracle(instance: Instance, limits: OracleLimits | None = None, allow_rotation: bool = False):
    """Return (OPT, packing). Heights are tried upward from the trivial bound;
    the first feasible one is optimal."""
    limits = limits or OracleLimits()
    items = instance.items
    W = instance.strip_width
    if len(items) > limits.n_max or W > limits.W_max:
        raise LimitExceeded(f"n={len(items)}, W={W} beyond oracle limits")
    if not items:
        return 0, Packing((), 0)
    upper = nfdh(instance)
    hmin = 0
    for it in items:
        h = it.height
        if allow_rotation and it.height <= W:
            h = min(h, it.width)
        hmin = max(hmin, h)
    lo = max(hmin, -(-total_area(items) // W))
    if lo > limits.H_max:
        raise LimitExceeded(f"height {lo} beyond oracle limits")
    dims = [(it.width, it.height) for it in items]
    for H in range(lo, upper.height):
        if H > limits.H_max:
            raise LimitExceeded(f"height {H} beyond oracle limits")
        try:
            res = fits_in_box(dims, W, H, allow_rotation=allow_rotation, node_limit=limits.node_limit)
        except BudgetExhausted:
            raise LimitExceeded("search budget exhausted") from None
        if res is not None:
            pl = [Placement(it.id, x, y, rot) for it, (x, y, rot) in zip(items, res)]
            return H, Packing.build(instance, pl)
    return upper.height, upper
