"""Instance factory behind ``strip-forge gen``."""

from __future__ import annotations

from .. import generators
from ..restructure.structure import build_structure, partition_into_boxes
from . import io


def generate(profile, seed, n=20, width=None, hmax=None, T=64) -> dict:
    """Documents keyed "instance" and, for grid and structured, "packing"
    (a known packing) and "hint" (structured only)."""
    if profile in ("uniform", "tall-heavy"):
        W = width or 20
        if n < 0 or W < 1:
            raise ValueError("need n >= 0 and width >= 1")
        inst = generators.random_instance(seed, n, W, "uniform" if profile == "uniform" else "tall", hmax)
        return {"instance": io.instance_to_dict(inst)}
    if profile == "grid":
        inst, pk, _, _ = generators.grid_packing_case(seed)
        return {"instance": io.instance_to_dict(inst), "packing": io.packing_to_dict(pk)}
    if profile == "structured":
        rp = generators.rounded_case(seed, "mixed", W=width, T=T)
        sp = build_structure(rp, partition_into_boxes(rp))
        return {"instance": io.instance_to_dict(sp.instance), "packing": io.packing_to_dict(sp.packing()),
                "hint": io.hint_to_dict(sp.to_partition())}
    raise ValueError(f"unknown profile {profile!r}")
