"""Width-vector dynamic programs that assign items to boxes.

The rigid program keeps, per rounded height, the vector of widths already
used in that height's boxes. The rotation variant also tracks stacked
heights per horizontal width group and two area accumulators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..classify import ItemClass, Params, classify_dims, round_height


class CapExceeded(Exception):
    pass


@dataclass(frozen=True)
class DPInfeasible:
    reason: str = "state space exhausted"

    def __bool__(self):
        return False


def _canon(vec, caps):
    """Sort the components of boxes with equal capacity (they are interchangeable)."""
    out = list(vec)
    i = 0
    while i < len(caps):
        j = i
        while j < len(caps) and caps[j] == caps[i]:
            j += 1
        out[i:j] = sorted(out[i:j])
        i = j
    return tuple(out)


def dp_place_tall_vertical(boxes, items, dedup=True, state_cap=2_000_000):
    """Assign items to boxes of their height without exceeding box widths.

    ``boxes``: {height: [width, ...]}; ``items``: sequence of (id, width, height).
    Returns {id: (height, box index)} or DPInfeasible. With ``dedup`` the
    states are canonical vectors (equal-capacity boxes are interchangeable).
    """
    by_h: dict = {}
    for iid, w, h in items:
        if h not in boxes or not boxes[h]:
            return DPInfeasible(f"no box of height {h}")
        by_h.setdefault(h, []).append((iid, w))
    result = {}
    for h in sorted(by_h):
        idx = sorted(range(len(boxes[h])), key=lambda i: boxes[h][i])
        caps = [boxes[h][i] for i in idx]
        order = sorted(by_h[h], key=lambda t: (-t[1], t[0]))
        layer = [(tuple(0 for _ in caps), None, None)]
        history = []
        for iid, w in order:
            nxt, seen = [], set()
            for pi, (vec, _, _) in enumerate(layer):
                for b, cap in enumerate(caps):
                    if vec[b] + w > cap:
                        continue
                    v = list(vec)
                    v[b] += w
                    if dedup:
                        if b and caps[b] == caps[b - 1] and vec[b] == vec[b - 1]:
                            continue  # same as using the previous box
                        v = _canon(v, caps)
                        if v in seen:
                            continue
                        seen.add(v)
                    nxt.append((tuple(v), pi, b))
            if not nxt:
                return DPInfeasible(f"height {h} overfull")
            if len(nxt) > state_cap:
                raise CapExceeded(f"{len(nxt)} states")
            history.append(nxt)
            layer = nxt
        picks, k = [], 0
        for step in reversed(range(len(order))):
            _, pi, b = history[step][k]
            picks.append(b)
            k = pi
        picks.reverse()
        if dedup:
            assign = _replay(order, picks, caps)
        else:
            assign = {iid: b for (iid, _), b in zip(order, picks)}
        for iid, b in assign.items():
            result[iid] = (h, idx[b])
    return result


def _replay(order, picks, caps):
    """Turn canonical box slots into concrete boxes.

    A step's slot indexes the previous canonical vector, which lists the
    loads of equal-capacity boxes in ascending order; ``perm`` tracks which
    concrete box sits at each slot.
    """
    n = len(caps)
    perm = list(range(n))  # canonical slot -> concrete box
    load = [0] * n
    assign = {}
    for (iid, w), b in zip(order, picks):
        concrete = perm[b]
        assign[iid] = concrete
        load[concrete] += w
        # recompute the canonical permutation: within equal-capacity runs,
        # concrete boxes are ordered by load
        i = 0
        new = []
        while i < n:
            j = i
            while j < n and caps[j] == caps[i]:
                j += 1
            run = sorted(range(i, j), key=lambda c: (load[c], c))
            new.extend(run)
            i = j
        perm = new
    for c in range(n):
        assert load[c] <= caps[c]
    return assign


# ---- rotations --------------------------------------------------------------

@dataclass(frozen=True)
class SlotSpec:
    """Capacities for the rotation and moldable programs.

    tall_boxes: {rounded height: [widths]}; groups: ascending rounded widths
    of horizontal groups with their stack capacities; small_cap and
    medium_cap bound the two area accumulators.
    """

    tall_boxes: dict
    group_widths: tuple = ()
    group_caps: tuple = ()
    small_cap: Fraction = Fraction(0)
    medium_cap: Fraction = Fraction(0)


def orientation_options(w, h, p: Params, W, spec: SlotSpec):
    """Slot options for one orientation: ('box', height, width) etc."""
    if w > W or h > p.T:
        return []
    cls = classify_dims(w, h, p, W)
    if cls in (ItemClass.TALL, ItemClass.VERTICAL):
        r, _, _ = round_height(h, p.epsilon, p.T)
        if r in spec.tall_boxes:
            return [("box", r, w)]
        return []
    if cls is ItemClass.HORIZONTAL:
        for g, gw in enumerate(spec.group_widths):
            if w <= gw:
                return [("group", g, h)]
        return []
    if cls is ItemClass.SMALL:
        return [("small", w * h)]
    if cls is ItemClass.MEDIUM:
        return [("medium", w * h)]
    return []  # large and medium-vertical items are placed by guessing


def _run_slot_dp(choices, spec: SlotSpec, state_cap):
    """Generic DP over per-item option lists. Each option is ('box', h, w),
    ('group', g, h), ('small', a) or ('medium', a), paired with a tag.
    Returns {item index: (tag, option, box index)} or DPInfeasible."""
    heights = sorted(spec.tall_boxes)
    caps = [sorted(spec.tall_boxes[h]) for h in heights]
    hpos = {h: i for i, h in enumerate(heights)}
    start = (tuple(tuple(0 for _ in c) for c in caps), tuple(0 for _ in spec.group_widths), Fraction(0), Fraction(0))
    layer = {start: None}
    history = []
    for options in choices:
        nxt = {}
        for state in layer:
            vecs, gh, a_s, a_m = state
            for tag, opt in options:
                kind = opt[0]
                if kind == "box":
                    hi = hpos[opt[1]]
                    vec = vecs[hi]
                    for b, cap in enumerate(caps[hi]):
                        if vec[b] + opt[2] > cap:
                            continue
                        if b and caps[hi][b] == caps[hi][b - 1] and vec[b] == vec[b - 1]:
                            continue
                        v = list(vec)
                        v[b] += opt[2]
                        nv = list(vecs)
                        nv[hi] = _canon(v, caps[hi])
                        key = (tuple(nv), gh, a_s, a_m)
                        if key not in nxt:
                            nxt[key] = (state, tag, opt, b)
                elif kind == "group":
                    g = opt[1]
                    if gh[g] + opt[2] > spec.group_caps[g]:
                        continue
                    ng = list(gh)
                    ng[g] += opt[2]
                    key = (vecs, tuple(ng), a_s, a_m)
                    if key not in nxt:
                        nxt[key] = (state, tag, opt, g)
                elif kind == "small":
                    if a_s + opt[1] > spec.small_cap:
                        continue
                    key = (vecs, gh, a_s + opt[1], a_m)
                    if key not in nxt:
                        nxt[key] = (state, tag, opt, None)
                elif kind == "medium":
                    if a_m + opt[1] > spec.medium_cap:
                        continue
                    key = (vecs, gh, a_s, a_m + opt[1])
                    if key not in nxt:
                        nxt[key] = (state, tag, opt, None)
        if not nxt:
            return DPInfeasible()
        if len(nxt) > state_cap:
            raise CapExceeded(f"{len(nxt)} states")
        history.append(nxt)
        layer = nxt
    key = next(iter(layer))
    out = {}
    for step in reversed(range(len(choices))):
        prev, tag, opt, b = history[step][key]
        out[step] = (tag, opt, b)
        key = prev
    return out


def _concrete_boxes(steps, spec: SlotSpec):
    """Map canonical box slots of the DP trace to concrete box indices."""
    heights = sorted(spec.tall_boxes)
    result = {}
    for h in heights:
        caps = sorted(spec.tall_boxes[h])
        idx = sorted(range(len(spec.tall_boxes[h])), key=lambda i: spec.tall_boxes[h][i])
        order, picks = [], []
        for step in sorted(steps):
            tag, opt, b = steps[step]
            if opt[0] == "box" and opt[1] == h:
                order.append((step, opt[2]))
                picks.append(b)
        for step, b in _replay(order, picks, caps).items():
            result[step] = idx[b]
    return result


def dp_rotations(items, p: Params, W, spec: SlotSpec, allow_rotation=True, state_cap=2_000_000):
    """Choose an orientation and a slot for each (id, w, h) item.

    Returns {id: (rotated, slot)} where slot is ('box', height, box index),
    ('group', g), ('small',) or ('medium',); or DPInfeasible.
    """
    choices = []
    for iid, w, h in items:
        opts = [(False, o) for o in orientation_options(w, h, p, W, spec)]
        if allow_rotation and w != h:
            opts += [(True, o) for o in orientation_options(h, w, p, W, spec)]
        if not opts:
            return DPInfeasible(f"item {iid} fits no slot")
        choices.append(opts)
    steps = _run_slot_dp(choices, spec, state_cap)
    if isinstance(steps, DPInfeasible):
        return steps
    boxes = _concrete_boxes(steps, spec)
    out = {}
    for k, (iid, _, _) in enumerate(items):
        rot, opt, b = steps[k]
        if opt[0] == "box":
            out[iid] = (rot, ("box", opt[1], boxes[k]))
        elif opt[0] == "group":
            out[iid] = (rot, ("group", b))
        else:
            out[iid] = (rot, (opt[0],))
    return out
