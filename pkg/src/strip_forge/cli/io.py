"""JSON file formats: strip-v1, mold-v1, pack-v1 and hint-v1."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from ..core import Instance, Item, Packing, Placement
from ..restructure.structure import BoxPartition
from ..solver.moldable import Job


class FormatError(ValueError):
    pass


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{what} must be an integer, got {v!r}")
    if v < 1:
        raise FormatError(f"{what} must be >= 1, got {v}")
    return v


def _coord(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{what} must be an integer, got {v!r}")
    return v


def _schema(d, name):
    if not isinstance(d, dict) or d.get("schema") != name:
        got = d.get("schema") if isinstance(d, dict) else type(d).__name__
        raise FormatError(f"expected schema {name!r}, got {got!r}")


# ---- instances ---------------------------------------------------------------

def instance_to_dict(inst: Instance) -> dict:
    return {"schema": "strip-v1", "width": inst.strip_width,
            "items": [{"id": it.id, "width": it.width, "height": it.height} for it in inst.items]}


def instance_from_dict(d) -> Instance:
    _schema(d, "strip-v1")
    try:
        items = tuple(Item(str(e["id"]), _int(e["width"], "width"), _int(e["height"], "height")) for e in d["items"])
        return Instance(_int(d["width"], "width"), items)
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed instance: {e}") from e
    except ValueError as e:
        raise FormatError(str(e)) from e


def jobs_to_dict(machines: int, jobs) -> dict:
    return {"schema": "mold-v1", "machines": machines,
            "jobs": [{"id": j.id, "allotments": [{"machines": i, "time": t} for i, t in j.allotments]} for j in jobs]}


def jobs_from_dict(d) -> tuple[int, list[Job]]:
    _schema(d, "mold-v1")
    try:
        m = _int(d["machines"], "machines")
        jobs = [Job(str(e["id"]), tuple((_int(a["machines"], "machines"), _int(a["time"], "time"))
                                        for a in e["allotments"])) for e in d["jobs"]]
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed moldable instance: {e}") from e
    except ValueError as e:
        raise FormatError(str(e)) from e
    if len({j.id for j in jobs}) != len(jobs):
        raise FormatError("duplicate job id")
    return m, jobs


# ---- packings -----------------------------------------------------------------

def packing_to_dict(pk: Packing) -> dict:
    return {"schema": "pack-v1", "height": pk.height,
            "placements": [{"id": p.item_id, "x": p.x, "y": p.y, "rotated": p.rotated} for p in pk.placements]}


def packing_from_dict(d) -> Packing:
    _schema(d, "pack-v1")
    try:
        pl = tuple(Placement(str(e["id"]), _coord(e["x"], "x"), _coord(e["y"], "y"), bool(e.get("rotated", False)))
                   for e in d["placements"])
        return Packing(pl, _coord(d["height"], "height"))
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed packing: {e}") from e


# ---- hints -------------------------------------------------------------------------

def hint_to_dict(part: BoxPartition) -> dict:
    return part.to_dict()


def hint_from_dict(d) -> BoxPartition:
    _schema(d, "hint-v1")
    try:
        part = BoxPartition.from_dict(d)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"malformed hint: {e}") from e
    if part.params is None:
        raise FormatError("hint needs params")
    p = part.params
    limit = math.ceil((Fraction(5, 4) + 5 * p.epsilon) * p.T)
    for k, b in enumerate(part.boxes):
        r = b.rect
        if r.x < 0 or r.y < 0 or r.w <= 0 or r.h <= 0 or (part.width and r.right > part.width) or r.top > limit:
            raise FormatError(f"box {k} lies outside the strip")
    return part


# ---- files ----------------------------------------------------------------------------

LOADERS = {"strip-v1": instance_from_dict, "mold-v1": jobs_from_dict, "pack-v1": packing_from_dict,
           "hint-v1": hint_from_dict}


def dumps(d) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e}") from e


def load(path, schema=None):
    d = read_json(path)
    name = schema or (d.get("schema") if isinstance(d, dict) else None)
    if name not in LOADERS:
        raise FormatError(f"{path}: unknown schema {name!r}")
    return LOADERS[name](d)


def write(path, d):
    Path(path).write_text(dumps(d))
