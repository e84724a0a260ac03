"""Property checks shared by the unit tests and the acceptance suite."""

import math
from fractions import Fraction

from strip_forge.restructure import make_grid_packing, reorder_tall_box, simple_reorder


def grid_reorder_violations(inst, pk, H, N):
    gp = make_grid_packing(inst, pk, H, N)
    cs, out = simple_reorder(gp)
    bad = []
    if out.height > math.ceil(Fraction(5 * H, 4)):
        bad.append(f"height {out.height}")
    if len(cs.tall_containers) > Fraction(3, 2) * N:
        bad.append(f"{len(cs.tall_containers)} tall containers")
    if len(cs.sliced_containers) > Fraction(9, 4) * N + 1:
        bad.append(f"{len(cs.sliced_containers)} sliced containers")
    if out.overlaps():
        bad.append("overlap")
    if out.slice_totals() != gp.slice_totals():
        bad.append("slices not conserved")
    if sorted((t.id, t.w, t.h) for t in out.tall) != sorted((t.id, t.w, t.h) for t in gp.tall):
        bad.append("tall items changed")
    return bad


def tall_box_violations(box, H, N, unm):
    res = reorder_tall_box(box, H, N, unm)
    bad = []
    if len(res.tall_boxes) > 2 * N * N + Fraction(15 * N, 4) + 8:
        bad.append(f"{len(res.tall_boxes)} tall sub-boxes")
    if len(res.vertical_boxes) > 4 * N * N + Fraction(31 * N, 4) + 5:
        bad.append(f"{len(res.vertical_boxes)} vertical sub-boxes")
    if res.extension > Fraction(H, 4):
        bad.append(f"extension {res.extension}")
    before = {t.id: t for t in box.tall if t.id in unm}
    after = {t.id: t for t in res.contents.tall if t.id in unm}
    if before != after:
        bad.append("unmovable moved")
    if res.contents.overlaps():
        bad.append("overlap")
    if res.contents.slice_multiset() != box.slice_multiset() and _totals(res.contents) != _totals(box):
        bad.append("slices not conserved")
    return bad


def _totals(box):
    out = {}
    for col in box.columns:
        for s in col:
            out[s.origin] = out.get(s.origin, 0) + s.h
    return out


# ---- placement instances and audits ------------------------------------------

from strip_forge.core import find_overlaps  # noqa: E402
from strip_forge.geometry import Rect  # noqa: E402
from strip_forge.placement import LPBox, residuals  # noqa: E402


def vertical_case(rng, n_classes=None, n_boxes=None):
    """Boxes filled by construction with columns of stacked heights, so the
    configuration LP is feasible. Returns (boxes, items, heights)."""
    heights = sorted(rng.sample(range(2, 9), n_classes or rng.randint(1, 4)))
    boxes, items, x = [], [], 0
    for _ in range(n_boxes or rng.randint(1, 3)):
        bw, bh = rng.randint(2, 12), rng.randint(max(heights), 16)
        boxes.append(Rect(x, 0, bw, bh))
        x += bw + 1
        c = 0
        while c < bw:
            cw = rng.randint(1, bw - c)
            left = bh
            for h in rng.sample(heights, len(heights)):
                if h <= left and rng.random() < 0.8:
                    left -= h
                    # split the column width into item widths
                    rest = cw
                    while rest:
                        w = rng.randint(1, min(rest, 3))
                        items.append((f"v{len(items)}", w, h))
                        rest -= w
            c += cw
    return boxes, items, heights


def vertical_audit(boxes, items, res, extra_height, extra_width):
    bad = []
    demands = {}
    for _, w, h in items:
        demands[h] = demands.get(h, 0) + w
    sol = res.solution
    if sol is None:
        return [] if not items else ["no solution"]
    lp_boxes = [LPBox(b.h, b.w) for b in boxes]
    if any(r != 0 for r in residuals(sol, lp_boxes, demands)):
        bad.append("nonzero residual")
    if len(sol.entries) > sol.rows:
        bad.append("not basic")
    if len(res.extra_boxes) > 7 * (len(demands) + len(boxes)):
        bad.append(f"{len(res.extra_boxes)} extra boxes")
    if any(e.h > extra_height or e.w != extra_width for e in res.extra_boxes):
        bad.append("extra box too large")
    in_extra = [iid for e in res.extra_boxes for iid, *_ in e.contents]
    placed = list(res.positions) + in_extra
    if sorted(placed) != sorted(i for i, _, _ in items):
        bad.append("items lost or duplicated")
    dims = {i: (w, h) for i, w, h in items}
    rects = [(x, y, *dims[i]) for i, (x, y) in res.positions.items()]
    if find_overlaps(rects):
        bad.append("overlap")
    for x, y, w, h in rects:
        if not any(b.contains(Rect(x, y, w, h)) for b in boxes):
            bad.append("item outside its box")
            break
    for e in res.extra_boxes:
        if sum(dims[i][1] for i, *_ in e.contents) > e.h:
            bad.append("extra box overfull")
    sub = sum(s.rect.area for s in res.sub_boxes)
    empty = sum(r.area for r in res.empty_boxes)
    if sub + empty != sum(b.area for b in boxes):
        bad.append("area identity")
    if empty < sum(b.area for b in boxes) - sum(w * h for _, w, h in items):
        bad.append("empty area too small")
    return bad


def horizontal_case(rng, W=64, n_boxes=None):
    """Stacks of wide, low items inside a few boxes."""
    boxes, items, y = [], [], 0
    widths = sorted(rng.sample(range(W // 4, W + 1), rng.randint(1, 4)))
    for _ in range(n_boxes or rng.randint(1, 3)):
        bw = rng.randint(widths[0], W)
        bh = rng.randint(2, 12)
        boxes.append(Rect(0, y, bw, bh))
        y += bh + 1
        left = bh
        while left:
            fits = [w for w in widths if w <= bw]
            h = rng.randint(1, min(left, 2))
            items.append((f"h{len(items)}", rng.choice(fits), h))
            left -= h
            if rng.random() < 0.2:
                break
    return boxes, items


def horizontal_audit(boxes, items, res, eps, delta, W):
    bad = []
    sol = res.solution
    dims = {i: (w, h) for i, w, h in items}
    if sol is not None:
        rest = [i for i in dims if i not in res.diverted]
        demands = {}
        for i in rest:
            s = res.rounded_width[i]
            demands[s] = demands.get(s, 0) + dims[i][1]
        if any(r != 0 for r in residuals(sol, [LPBox(b.w, b.h) for b in boxes], demands)):
            bad.append("nonzero residual")
        if len(sol.entries) > sol.rows:
            bad.append("not basic")
        used = sum(int(x) * c.total for _, c, x in sol.entries)
        if sum(r.area for r in res.empty_boxes) + used != sum(b.area for b in boxes):
            bad.append("area identity")
    if len(set(res.rounded_width.values())) > 1 / (eps * delta * delta):
        bad.append("too many widths")
    if any(res.rounded_width[i] < dims[i][0] for i in dims):
        bad.append("rounded width below true width")
    if sorted(list(res.positions) + list(res.top_box)) != sorted(dims):
        bad.append("items lost or duplicated")
    rects = [(x, y, *dims[i]) for i, (x, y) in res.positions.items()]
    if find_overlaps(rects):
        bad.append("overlap")
    for x, y, w, h in rects:
        if not any(b.contains(Rect(x, y, w, h)) for b in boxes):
            bad.append("item outside its box")
            break
    top = [(x, y, *dims[i]) for i, (x, y) in res.top_box.items()]
    if find_overlaps(top) or any(x + w > W or y + h > res.top_height for x, y, w, h in top):
        bad.append("top box invalid")
    return bad


# ---- dynamic programs against enumeration ------------------------------------

from fractions import Fraction as _F  # noqa: E402

from _oracles import assignment_feasible, slot_feasible  # noqa: E402
from strip_forge.classify import Params  # noqa: E402
from strip_forge.solver.dp import (  # noqa: E402
    DPInfeasible,
    SlotSpec,
    dp_place_tall_vertical,
    dp_rotations,
    orientation_options,
)
from strip_forge.solver.moldable import Job, dp_moldable, moldable_options  # noqa: E402

DP_PARAMS = Params(_F(1, 4), _F(1, 4), _F(1, 16), 64, f_exponent=2)
DP_W = 64


def rigid_dp_case(rng):
    heights = rng.sample([2, 3, 5, 7], rng.randint(1, 2))
    boxes = {h: [rng.randint(1, 8) for _ in range(rng.randint(1, 3))] for h in heights}
    items = [(f"i{k}", rng.randint(1, 5), rng.choice(heights)) for k in range(rng.randint(0, 8))]
    return boxes, items


def rigid_dp_agrees(boxes, items):
    res = dp_place_tall_vertical(boxes, items)
    plain = dp_place_tall_vertical(boxes, items, dedup=False)
    expect = assignment_feasible(boxes, items)
    if bool(res) != expect and not (expect and res == {}):
        return False
    if isinstance(res, DPInfeasible) != isinstance(plain, DPInfeasible):
        return False
    if not isinstance(res, DPInfeasible):
        load = {}
        for iid, w, h in items:
            hh, b = res[iid]
            if hh != h:
                return False
            load[(h, b)] = load.get((h, b), 0) + w
        return all(v <= boxes[h][b] for (h, b), v in load.items())
    return True


_SHAPES = [
    lambda r: (r.randint(2, 15), r.randint(32, 64)),  # tall
    lambda r: (r.randint(1, 4), r.randint(16, 31)),  # vertical
    lambda r: (r.randint(16, 64), r.randint(1, 4)),  # horizontal
    lambda r: (r.randint(1, 4), r.randint(1, 4)),  # small
    lambda r: (r.randint(5, 15), r.randint(1, 8)),  # medium
]


def slot_spec(rng):
    tall = {h: [rng.randint(2, 24) for _ in range(rng.randint(1, 3))] for h in rng.sample([20, 28, 40, 48, 64], 2)}
    return SlotSpec(tall, (32, 64), (rng.randint(0, 6), rng.randint(0, 6)),
                    _F(rng.randint(0, 30)), _F(rng.randint(0, 120)))


def _expanded(opts, spec):
    n = 0
    for o in opts:
        n += len(spec.tall_boxes.get(o[1], ())) if o[0] == "box" else 1
    return n


def rotation_case(rng, n_max=8, budget=20000):
    while True:
        spec = slot_spec(rng)
        items = [(f"r{k}", *rng.choice(_SHAPES)(rng)) for k in range(rng.randint(1, n_max))]
        opts = [orientation_options(w, h, DP_PARAMS, DP_W, spec) + (orientation_options(h, w, DP_PARAMS, DP_W, spec)
                if w != h else []) for _, w, h in items]
        size = 1
        for o in opts:
            size *= max(1, _expanded(o, spec))
        if size <= budget:
            return spec, items, opts


def rotation_dp_agrees(spec, items, opts):
    res = dp_rotations(items, DP_PARAMS, DP_W, spec)
    expect = slot_feasible(opts, spec.tall_boxes, spec.group_caps, spec.small_cap, spec.medium_cap)
    return (not isinstance(res, DPInfeasible)) == expect


def moldable_case(rng, n_max=8, budget=20000, m=64):
    while True:
        spec = slot_spec(rng)
        jobs = []
        for k in range(rng.randint(1, n_max)):
            al = {}
            for _ in range(rng.randint(1, 3)):
                al[rng.choice([1, 2, 3, 4, 8, 12, 16, 32, 48, 64])] = rng.choice([1, 2, 3, 4, 6, 10, 20, 24, 40, 50, 64])
            jobs.append(Job(f"j{k}", tuple(al.items())))
        opts = [[o for _, o in moldable_options(j, DP_PARAMS, m, spec, len(jobs))] for j in jobs]
        size = 1
        for o in opts:
            size *= max(1, _expanded(o, spec))
        if size <= budget:
            return spec, jobs, opts, m


def moldable_dp_agrees(spec, jobs, opts, m):
    res = dp_moldable(jobs, m, DP_PARAMS, spec)
    expect = slot_feasible(opts, spec.tall_boxes, spec.group_caps, spec.small_cap, spec.medium_cap)
    return (not isinstance(res, DPInfeasible)) == expect


def oracle_capped(dims, W, rot, cap=6):
    """exact_oracle's answer, with everything above ``cap`` reported as cap+1."""
    from strip_forge.core import Instance
    from strip_forge.solver.oracle import LimitExceeded, OracleLimits, exact_oracle

    try:
        return min(exact_oracle(Instance.from_dims(W, dims), OracleLimits(H_max=cap), rot)[0], cap + 1)
    except LimitExceeded:
        return cap + 1
