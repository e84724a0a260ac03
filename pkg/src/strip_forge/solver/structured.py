"""The box-structure solver: guess or receive a partition into typed boxes,
fill it, and keep the better of that packing and the 2T fallback."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .._search import BudgetExhausted, fits_in_box
from ..baselines import dh_order, upper_bound_pack
from ..classify import (
    DeltaMuNotFound,
    ItemClass,
    Params,
    arithmetic_round,
    classify_dims,
    find_delta_mu,
    round_height,
)
from ..core import Instance, Item, Packing, Placement, lower_bound, validate_packing
from ..geometry import Rect
from ..placement.horizontal import place_horizontal
from ..placement.lp import UniverseOverflow
from ..placement.small import place_medium, place_small
from ..placement.vertical import PlacementError
from ..restructure.boxes import Box, BoxKind
from ..restructure.structure import (
    BoxPartition,
    ConstructionFailed,
    GapNotFound,
    RoundedPacking,
    build_structure,
    partition_into_boxes,
)
from .dp import CapExceeded, DPInfeasible, dp_place_tall_vertical
from .search import binary_search


class Provenance(str, enum.Enum):
    HINT = "Hint"
    EXHAUSTIVE = "Exhaustive"
    HEURISTIC = "Heuristic"


class GuessRejected(Exception):
    """The guessed structure cannot host the items."""


@dataclass(frozen=True)
class Hint:
    partition: BoxPartition


@dataclass(frozen=True)
class Exhaustive:
    max_boxes: int = 4
    max_width: int = 16
    max_items: int = 8
    max_guesses: int = 5_000
    f_exponent: int = 2


@dataclass(frozen=True)
class Heuristic:
    f_exponent: int = 2


@dataclass
class StructureGuess:
    partition: BoxPartition
    params: Params
    provenance: Provenance
    scale: int = 1  # heights of the instance were multiplied by this


@dataclass
class SolveResult:
    packing: Packing
    height: int
    source: str  # "structured" or "fallback"
    T: int | None = None
    guesses: int = 0
    probes: int = 0
    diagnostics: list = field(default_factory=list)


def normalize_epsilon(eps) -> Fraction:
    """min(1/4, 1/ceil(10/eps))."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return min(Fraction(1, 4), Fraction(1, math.ceil(10 / eps)))


def _int(v, what):
    v = Fraction(v)
    if v.denominator != 1:
        raise GuessRejected(f"{what} {v} is not integral")
    return v.numerator


def _match_large(items, boxes):
    """Assign each (id, w, h) item to its own box (Rect) it fits into."""
    if not items:
        return {}
    if len(boxes) < len(items):
        raise GuessRejected("fewer large boxes than large items")
    rows, cols = [], []
    for a, (_, w, h) in enumerate(items):
        for b, r in enumerate(boxes):
            if w <= r.w and h <= r.h:
                rows.append(a)
                cols.append(b)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(items), len(boxes)))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        raise GuessRejected("large items do not fit their boxes")
    return {items[a][0]: boxes[int(match[a])] for a in range(len(items))}


def _first_fit(caps, items):
    """First fit decreasing per height; None when it gets stuck (the exact
    program decides then)."""
    left = {h: list(ws) for h, ws in caps.items()}
    out = {}
    for iid, w, h in sorted(items, key=lambda t: (t[2], -t[1], t[0])):
        for k, room in enumerate(left.get(h, ())):
            if w <= room:
                left[h][k] -= w
                out[iid] = (h, k)
                break
        else:
            return None
    return out


def place_with_structure(instance: Instance, guess: StructureGuess) -> Packing:
    """Fill the boxes of ``guess`` with the items of ``instance``.

    Large and medium-vertical items are matched to large boxes; tall and
    vertical items go through the width-vector program into boxes of their
    rounded height; horizontal items use the configuration LP; small items
    fill the free boxes; what is left is stacked on top. Raises
    GuessRejected when some step fails.
    """
    p = guess.params
    W = instance.strip_width
    boxes = guess.partition.boxes
    by_kind = {k: [b for b in boxes if b.kind is k] for k in BoxKind}
    groups = {c: [] for c in ItemClass}
    rounded = {}
    for it in instance.items:
        c = classify_dims(it.width, it.height, p, W)
        groups[c].append(it)
        if c in (ItemClass.LARGE, ItemClass.MEDIUM_VERTICAL, ItemClass.TALL, ItemClass.VERTICAL):
            if it.height > p.T:
                raise GuessRejected(f"item {it.id!r} is taller than T")
            try:
                rounded[it.id] = round_height(it.height, p.epsilon, p.T)[0]
            except ValueError as e:
                raise GuessRejected(str(e)) from e

    pos = {}
    used = []  # rects of placed items, for the free-space bookkeeping
    large = [(it.id, it.width, rounded[it.id]) for it in groups[ItemClass.LARGE] + groups[ItemClass.MEDIUM_VERTICAL]]
    for iid, r in _match_large(large, [b.rect for b in by_kind[BoxKind.LARGE_ITEM]]).items():
        pos[iid] = (_int(r.x, "x"), _int(r.y, "y"))

    sub = by_kind[BoxKind.TALL_SUB] + by_kind[BoxKind.VERTICAL_SUB]
    caps, where = {}, {}
    for b in sub:
        h = _int(b.uniform_height, "uniform height")
        where.setdefault(h, []).append(b.rect)
        caps.setdefault(h, []).append(_int(b.rect.w, "width"))
    tv = [(it.id, it.width, rounded[it.id]) for it in groups[ItemClass.TALL] + groups[ItemClass.VERTICAL]]
    assign = _first_fit(caps, tv)
    if assign is None:
        try:
            assign = dp_place_tall_vertical(caps, tv)
        except CapExceeded as e:
            raise GuessRejected(f"program too large: {e}") from e
    if isinstance(assign, DPInfeasible):
        raise GuessRejected(f"tall/vertical items: {assign.reason}")
    fill = {}
    widths = {iid: w for iid, w, _ in tv}
    for iid, (h, k) in sorted(assign.items(), key=lambda t: (t[1], -widths[t[0]], t[0])):
        r = where[h][k]
        x = fill.get((h, k), 0)
        pos[iid] = (_int(r.x, "x") + x, _int(r.y, "y"))
        fill[(h, k)] = x + widths[iid]
    free = [Rect(b.rect.x, b.rect.y, b.rect.w, b.rect.h) for b in by_kind[BoxKind.SMALL_EMPTY]]
    for h, rs in where.items():
        for k, r in enumerate(rs):
            left = r.w - fill.get((h, k), 0)
            if left > 0:
                free.append(Rect(r.x + fill.get((h, k), 0), r.y, left, r.h))

    hz = [(it.id, it.width, it.height) for it in groups[ItemClass.HORIZONTAL]]
    h_boxes = [b.rect for b in by_kind[BoxKind.HORIZONTAL]]
    try:
        hp = place_horizontal(h_boxes, hz, p.epsilon, p.delta, W)
    except (PlacementError, UniverseOverflow) as e:
        raise GuessRejected(f"horizontal items: {e}") from e
    pos.update({i: (_int(x, "x"), _int(y, "y")) for i, (x, y) in hp.positions.items()})
    free += [r for r in hp.empty_boxes]
    free = [Rect(_int(r.x, "x"), math.ceil(r.y), _int(r.w, "w"), math.floor(r.top) - math.ceil(r.y)) for r in free]
    free = [r for r in free if r.w > 0 and r.h > 0]

    small = [(it.id, it.width, it.height) for it in groups[ItemClass.SMALL]]
    sp = place_small(free, small, p.mu, p.T, W)
    pos.update(sp.positions)

    items = instance.by_id()
    base = max((y + items[i].height for i, (_, y) in pos.items()), default=0)
    for rel, height in ((hp.top_box, hp.top_height), (sp.overflow, sp.overflow_height)):
        for i, (x, y) in rel.items():
            pos[i] = (x, base + y)
        base += height
    medium = [(it.id, it.width, it.height) for it in groups[ItemClass.MEDIUM]]
    mpos, _ = place_medium(medium, W)
    for i, (x, y) in mpos.items():
        pos[i] = (x, base + y)

    packing = Packing.build(instance, (Placement(i, x, y) for i, (x, y) in sorted(pos.items())))
    rep = validate_packing(instance, packing)
    if not rep.ok:
        raise GuessRejected(f"filled structure is not a valid packing: {rep}")
    return packing


# ---- scaling -------------------------------------------------------------------

def _scaled(instance: Instance, K: int) -> Instance:
    return Instance(instance.strip_width, tuple(Item(it.id, it.width, it.height * K) for it in instance.items))


def _unscale(instance: Instance, packing: Packing, K: int) -> Packing:
    """Divide y by K, rounding up. Order along every column is kept, so a
    valid scaled packing stays valid."""
    pl = [Placement(q.item_id, q.x, -(-q.y // K), q.rotated) for q in packing.placements]
    return Packing.build(instance, pl)


def _params_for(instance, eps, T, f_exponent):
    """Params at guess T and the factor K that makes every grid used by the
    rounding and restructuring integral."""
    dm = find_delta_mu(instance, eps, T, f_exponent=f_exponent)
    k = int(1 / eps)
    x = 0
    d = Fraction(1)
    while d > dm.delta:
        d *= eps
        x += 1
    K = 8 * k ** (x + 1)
    return Params(eps, dm.delta, dm.mu, T * K, f_exponent=f_exponent), K


# ---- guess generators ---------------------------------------------------------------

def _shelf_sections(items, rounded, classes, W, g):
    """Separate FFDH shelf packings for large, tall/vertical and horizontal
    items, stacked with grid-aligned section starts. Returns {id: (x, y)}."""
    order = [(ItemClass.LARGE, ItemClass.MEDIUM_VERTICAL), (ItemClass.TALL, ItemClass.VERTICAL), (ItemClass.HORIZONTAL,)]
    pos, base = {}, 0
    for sec in order:
        its = [Item(it.id, it.width, rounded.get(it.id, it.height)) for it in items if classes[it.id] in sec]
        shelves = []  # [y, height, used]
        y = base
        for it in dh_order(its):
            for s in shelves:
                if s[2] + it.width <= W:
                    pos[it.id] = (s[2], s[0])
                    s[2] += it.width
                    break
            else:
                h = g * math.ceil(Fraction(it.height) / g)
                shelves.append([y, h, it.width])
                pos[it.id] = (0, y)
                y += h
        base = y
    return pos


def _per_item_boxes(pos, dims, classes):
    kind = {ItemClass.LARGE: BoxKind.LARGE_ITEM, ItemClass.MEDIUM_VERTICAL: BoxKind.LARGE_ITEM,
            ItemClass.TALL: BoxKind.TALL_SUB, ItemClass.VERTICAL: BoxKind.VERTICAL_SUB,
            ItemClass.HORIZONTAL: BoxKind.HORIZONTAL}
    out = []
    for i, (x, y) in sorted(pos.items()):
        w, h = dims[i]
        k = kind[classes[i]]
        uh = h if k in (BoxKind.TALL_SUB, BoxKind.VERTICAL_SUB) else None
        out.append(Box(k, Rect(x, y, w, h), uh))
    return out


def heuristic_guesses(instance: Instance, p: Params):
    """Structures derived from a sectioned shelf packing of the rounded big
    items: first the restructured one, then one box per item."""
    W = instance.strip_width
    g = p.epsilon * p.delta * p.T
    classes = {it.id: classify_dims(it.width, it.height, p, W) for it in instance.items}
    big = [it for it in instance.items if classes[it.id] not in (ItemClass.SMALL, ItemClass.MEDIUM)]
    rounded = {}
    for it in big:
        if classes[it.id] is not ItemClass.HORIZONTAL:
            rounded[it.id] = round_height(it.height, p.epsilon, p.T)[0]
    pos = _shelf_sections(big, rounded, classes, W, g)
    r_items = tuple(Item(it.id, it.width, rounded.get(it.id, it.height)) for it in big)
    r_inst = Instance(W, r_items)
    r_pack = Packing.build(r_inst, (Placement(i, x, y) for i, (x, y) in pos.items()))
    rp = RoundedPacking(r_inst, r_pack, p)
    try:
        sp = build_structure(rp, partition_into_boxes(rp))
        yield BoxPartition(W, sp.boxes, p)
    except (ConstructionFailed, GapNotFound, ValueError):
        pass
    dims = {it.id: (it.width, it.height) for it in r_items}
    r_classes = {i: classes[i] for i in dims}
    yield BoxPartition(W, _per_item_boxes(pos, dims, r_classes), p)


def _set_partitions(seq):
    if not seq:
        yield []
        return
    first, rest = seq[0], seq[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def exhaustive_guesses(instance: Instance, p: Params, caps: Exhaustive):
    """Every structure with at most ``caps.max_boxes`` boxes shrunk to their
    contents: one box per large item, tall/vertical items of equal rounded
    height grouped side by side, horizontal items grouped in stacks. Box
    positions come from an exact rectangle-packing search inside
    W x (5/4 + 5 eps) T."""
    W = instance.strip_width
    g = p.epsilon * p.delta * p.T
    limit = math.floor((Fraction(5, 4) + 5 * p.epsilon) * p.T)
    classes = {it.id: classify_dims(it.width, it.height, p, W) for it in instance.items}
    large, by_h, hz = [], {}, []
    for it in instance.items:
        c = classes[it.id]
        if c in (ItemClass.LARGE, ItemClass.MEDIUM_VERTICAL):
            large.append((BoxKind.LARGE_ITEM, it.width, round_height(it.height, p.epsilon, p.T)[0], None))
        elif c in (ItemClass.TALL, ItemClass.VERTICAL):
            r = round_height(it.height, p.epsilon, p.T)[0]
            by_h.setdefault(r, []).append(it)
        elif c is ItemClass.HORIZONTAL:
            hz.append(it)
    if len(large) > caps.max_boxes:
        return
    options = []
    for r, its in sorted(by_h.items()):
        kind = BoxKind.TALL_SUB if classify_dims(1, r, p, W) is ItemClass.TALL else BoxKind.VERTICAL_SUB
        options.append([[(kind, sum(i.width for i in blk), r, r) for blk in part] for part in _set_partitions(its)])
    options.append([[(BoxKind.HORIZONTAL, max(i.width for i in blk),
                      int(g * math.ceil(Fraction(sum(i.height for i in blk)) / g)), None) for blk in part]
                    for part in _set_partitions(hz)])
    count = 0
    for combo in itertools.product(*options):
        specs = large + [s for part in combo for s in part]
        if len(specs) > caps.max_boxes or any(s[1] > W for s in specs):
            continue
        count += 1
        if count > caps.max_guesses:
            return
        unit = math.gcd(*(int(s[2]) for s in specs)) if specs else 1
        rows = limit // unit
        try:
            spots = fits_in_box([(s[1], int(s[2]) // unit) for s in specs], W, rows, node_limit=200_000)
        except BudgetExhausted:
            continue
        if spots is None:
            continue
        boxes = [Box(k, Rect(x, y * unit, w, h), uh) for (k, w, h, uh), (x, y, _) in zip(specs, spots)]
        yield BoxPartition(W, boxes, p)


# ---- the driver ------------------------------------------------------------------

def _try(instance, guess):
    try:
        return place_with_structure(instance, guess), ""
    except GuessRejected as e:
        return None, str(e)


def solve_structured(instance: Instance, eps, mode=None) -> SolveResult:
    """A valid packing that is never higher than the 2T fallback.

    ``mode`` is Hint(partition), Exhaustive(caps) or Heuristic() (default).
    In hint mode the partition carries its own Params, in the instance's
    height units. The other modes binary-search the guess T between the
    lower bound and twice of it, accepting a guess when the filled
    structure stays within (5/4 + 10 eps') T.
    """
    mode = mode if mode is not None else Heuristic()
    fallback, _ = upper_bound_pack(instance)
    if not instance.items:
        return SolveResult(fallback, 0, "fallback")
    best = SolveResult(fallback, fallback.height, "fallback")
    diag = best.diagnostics

    if isinstance(mode, Hint):
        part = mode.partition
        if part.params is None:
            raise ValueError("hint partitions need params")
        packing, why = _try(instance, StructureGuess(part, part.params, Provenance.HINT))
        best.guesses = 1
        if packing is None:
            diag.append(f"hint rejected: {why}")
        elif packing.height <= best.height:
            best = SolveResult(packing, packing.height, "structured", part.params.T, 1, 0, diag)
        return best

    e = normalize_epsilon(eps)
    if isinstance(mode, Exhaustive):
        if instance.strip_width > mode.max_width or len(instance.items) > mode.max_items:
            raise CapExceeded(f"exhaustive mode is capped at W <= {mode.max_width}, n <= {mode.max_items}")
    ratio = Fraction(5, 4) + 10 * e
    T0 = lower_bound(instance)
    guesses = 0

    def probe(T):
        nonlocal guesses
        # heights to multiples of eps*T/n, so the guess becomes n/eps
        rounded, info = arithmetic_round(instance, e, T)
        Tn = len(instance.items) * int(1 / e)
        try:
            p, K = _params_for(rounded, e, Tn, mode.f_exponent)
        except (DeltaMuNotFound, ValueError) as err:
            diag.append(f"T={T}: {err}")
            return None
        scaled = _scaled(rounded, K)
        gen = exhaustive_guesses(scaled, p, mode) if isinstance(mode, Exhaustive) else heuristic_guesses(scaled, p)
        prov = Provenance.EXHAUSTIVE if isinstance(mode, Exhaustive) else Provenance.HEURISTIC
        for part in gen:
            guesses += 1
            packing, why = _try(scaled, StructureGuess(part, p, prov, K))
            if packing is None:
                continue
            out = info.packing_to_original(instance, _unscale(rounded, packing, K))
            if out.height <= ratio * T:
                return out
        diag.append(f"T={T}: no structure accepted")
        return None

    res = binary_search(T0, 2 * T0, probe)
    if res.result is not None and res.result.height <= best.height:
        best = SolveResult(res.result, res.result.height, "structured", res.T, guesses, res.probes, diag)
    else:
        best.guesses, best.probes, best.T = guesses, res.probes, res.T
    return best
