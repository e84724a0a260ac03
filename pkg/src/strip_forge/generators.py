"""Random instances and packings for tests, benchmarks and the CLI."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .core import Instance, Item, Packing, Placement

PROFILES = ("uniform", "tall", "wide", "small", "mixed")


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_instance(seed, n, W, profile="uniform", hmax=None) -> Instance:
    """n items for strip width W drawn from a named profile."""
    rng = _rng(seed)
    hmax = hmax or max(2, W)
    dims = []
    for _ in range(n):
        p = rng.choice(PROFILES[:4]) if profile == "mixed" else profile
        if p == "uniform":
            w, h = rng.randint(1, W), rng.randint(1, hmax)
        elif p == "tall":
            w, h = rng.randint(1, max(1, W // 4)), rng.randint(max(1, hmax // 3), hmax)
        elif p == "wide":
            w, h = rng.randint(max(1, W // 2), W), rng.randint(1, max(1, hmax // 4))
        elif p == "small":
            w, h = rng.randint(1, max(1, W // 5)), rng.randint(1, max(1, hmax // 5))
        else:
            raise ValueError(f"unknown profile {profile!r}")
        dims.append((w, h))
    return Instance.from_dims(W, dims)


class _Canvas:
    def __init__(self, W, H):
        self.W, self.H = W, H
        self.cells = [[False] * W for _ in range(H)]

    def free(self, x, y, w, h):
        if x < 0 or y < 0 or x + w > self.W or y + h > self.H:
            return False
        return not any(self.cells[r][c] for r in range(y, y + h) for c in range(x, x + w))

    def fill(self, x, y, w, h):
        for r in range(y, y + h):
            for c in range(x, x + w):
                self.cells[r][c] = True


def packed_instance(seed, W, H, n_tall=8, n_other=60, tall_pitch=1, wmax_tall=None, wmax=4):
    """A valid packing of height <= H built by random rejection placement.

    Tall items (height > H/4) start and end on multiples of ``tall_pitch``.
    Returns (instance, packing).
    """
    rng = _rng(seed)
    cv = _Canvas(W, H)
    placed = []
    wmax_tall = wmax_tall or max(1, W // 5)
    ks = [k for k in range(1, H // tall_pitch + 1) if 4 * k * tall_pitch > H]
    tries = 0
    while sum(1 for p in placed if p[4]) < n_tall and tries < 50 * max(1, n_tall):
        tries += 1
        h = rng.choice(ks) * tall_pitch
        w = rng.randint(1, wmax_tall)
        x = rng.randint(0, W - w)
        y = rng.randrange(0, H - h + 1, tall_pitch)
        if cv.free(x, y, w, h):
            cv.fill(x, y, w, h)
            placed.append((x, y, w, h, True))
    hs = max(1, H // 4)
    for _ in range(n_other * 20):
        if len(placed) >= n_tall + n_other:
            break
        w, h = rng.randint(1, wmax), rng.randint(1, hs)
        x, y = rng.randint(0, W - w), rng.randint(0, H - h)
        if cv.free(x, y, w, h):
            cv.fill(x, y, w, h)
            placed.append((x, y, w, h, False))
    items = tuple(Item(str(i), w, h) for i, (_, _, w, h, _) in enumerate(placed))
    inst = Instance(W, items)
    pk = Packing.build(inst, (Placement(str(i), x, y) for i, (x, y, _, _, _) in enumerate(placed)))
    return inst, pk


def grid_packing_case(seed, N_max=20, tall_max=30):
    """Inputs for the simplified-case reorder: (instance, packing, H, N).

    N is a multiple of 4 so that H/4, 3H/4 and 5H/4 are grid lines.
    """
    rng = _rng(seed)
    N = rng.choice(range(4, N_max + 1, 4))
    pitch = rng.choice([1, 2])
    H = N * pitch
    W = rng.randint(8, 40)
    inst, pk = packed_instance(rng, W, H, n_tall=rng.randint(0, tall_max), n_other=rng.randint(5, 80),
                               tall_pitch=pitch, wmax_tall=rng.randint(1, 6))
    return inst, pk, H, N


def _layered_box(rng, H, hb, width, layers, unmovables_per_side, touching=False):
    from .restructure.grid import Slice, TallPlacement
    from .restructure.reorder import BoxContents

    cv = _Canvas(width + 16, hb)  # 8 columns of margin on each side
    tall, unm = [], []
    ks = [k for k in range(1, hb + 1) if 4 * k > H]
    for side in ("L", "R"):
        for _ in range(rng.randint(0, unmovables_per_side)):
            for _ in range(40):
                h = rng.choice(ks)
                y = rng.choice([0, hb - h]) if touching else rng.randint(0, hb - h)
                if not touching and y + h > hb - Fraction(H, 4):
                    continue
                inside = rng.randint(1, 4)
                out = rng.randint(1, 3)
                x = 8 - out if side == "L" else 8 + width - inside
                w = inside + out
                if cv.free(x, y, w, h):
                    cv.fill(x, y, w, h)
                    iid = f"u{side}{len(unm)}"
                    tall.append(TallPlacement(iid, x - 8, Fraction(y), w, Fraction(h)))
                    unm.append(iid)
                    break
    for r in range(hb):
        for c in list(range(8)) + list(range(8 + width, width + 16)):
            cv.cells[r][c] = True
    n = 0
    for layer in range(layers):
        lo = layer * hb // layers
        for _ in range(4 * width):
            h = rng.choice(ks)
            w = rng.randint(1, 4)
            x = rng.randint(8, 8 + width - w)
            if touching:
                y = rng.choice([0, hb - h])
            else:
                y = min(max(0, lo + rng.randint(-2, 2)), hb - h)
            if cv.free(x, y, w, h):
                cv.fill(x, y, w, h)
                tall.append(TallPlacement(f"t{n}", x - 8, Fraction(y), w, Fraction(h)))
                n += 1
    cols = [[] for _ in range(width)]
    m = 0
    for c in range(width):
        r = 0
        while r < hb:
            if cv.cells[r][c + 8]:
                r += 1
                continue
            top = r
            while top < hb and not cv.cells[top][c + 8]:
                top += 1
            if touching:
                if r > 0 and top < hb:
                    r = top
                    continue
                # one stack per gap, so each gap is a single pseudo piece
                ys = [r]
                while ys[-1] < top:
                    ys.append(rng.randint(ys[-1] + 1, top))
                for a, b in zip(ys, ys[1:]):
                    cols[c].append(Slice(f"v{m}", Fraction(a), Fraction(b - a)))
                    m += 1
            else:
                y = r
                while y < top:
                    h = rng.randint(1, max(1, top - y))
                    if rng.random() < 0.8:
                        cols[c].append(Slice(f"v{m}", Fraction(y), Fraction(h)))
                        m += 1
                    y += h
            r = top
    return BoxContents(width, Fraction(hb), tuple(tall), tuple(tuple(c) for c in cols)), tuple(unm)


def tall_box_case(seed, N=None, width=None, unmovables_per_side=2):
    """A box of height > 3H/4 with three layers of tall items, slices in the
    gaps and unmovable items crossing the side borders below h(B) - H/4.
    Returns (BoxContents, H, N, unmovable ids)."""
    rng = _rng(seed)
    N = N or rng.choice([8, 12, 16, 20])
    H = N
    hb = rng.randint(3 * N // 4 + 1, N)
    box, unm = _layered_box(rng, H, hb, width or rng.randint(12, 40), 3, unmovables_per_side)
    return box, H, N, unm


def medium_box_case(seed, N=None, width=None):
    """A box with H/2 < h(B) <= 3H/4 and two tall layers: (BoxContents, H, N)."""
    rng = _rng(seed)
    N = N or rng.choice([8, 12, 16, 20])
    hb = rng.randint(N // 2 + 1, 3 * N // 4)
    box, _ = _layered_box(rng, N, hb, width or rng.randint(8, 40), 2, 0)
    return box, N, N


def small_box_case(seed, N=None, width=None):
    """A box with h(B) <= H/2 and one tall layer: (BoxContents, H, N)."""
    rng = _rng(seed)
    N = N or rng.choice([8, 12, 16, 20])
    hb = rng.randint(N // 4 + 1, N // 2)
    box, _ = _layered_box(rng, N, hb, width or rng.randint(8, 40), 1, 0)
    return box, N, N


def two_sided_case(seed, unmovables_per_side=2):
    """A region whose items each touch its bottom or its top.
    Returns (BoxContents, unmovable ids)."""
    rng = _rng(seed)
    H = rng.choice([8, 12, 16])
    hb = rng.randint(H // 4 + 1, H)
    return _layered_box(rng, H, hb, rng.randint(8, 40), 1, unmovables_per_side, touching=True)


def rounded_case(seed, profile="mixed", W=None, T=64):
    """A grid-aligned rounded packing made of bays: tall/vertical regions,
    large items and stacks of horizontal items. Returns a RoundedPacking.

    Uses eps = delta = 1/4 and mu = 1/16; T must be a multiple of 32 so that
    H/4 and half the grid pitch are integers. ``profile`` is one of "tall"
    (bays taller than 3H/4), "wide" (wide tall items crossing H/2), "medium",
    "small" or "mixed".
    """
    from .classify import Params
    from .restructure.structure import RoundedPacking

    if T % 32:
        raise ValueError("T must be a multiple of 32")
    rng = _rng(seed)
    eps = Fraction(1, 4)
    p = Params(eps, eps, Fraction(1, 16), T, f_exponent=2)
    g = T // 16
    H = (1 + 2 * eps) * T
    W = W or rng.randint(48, 96)
    delta_w = -(-W // 4)  # smallest width that is not tall
    tall_hs = [h for h in range(T // 2, T + 1, g)]
    vert_hs = [h for h in range(T // 4, int(H / 4) + 1, g)]
    top = int(H)
    cv = _Canvas(W, top)
    dims, placed = [], []

    def put(w, h, x, y):
        if cv.free(x, y, w, h):
            cv.fill(x, y, w, h)
            placed.append((x, y, w, h))
            return True
        return False

    kinds = {"tall": ["tall"], "wide": ["wide"], "medium": ["medium"], "small": ["small"],
             "mixed": ["tall", "wide", "medium", "small", "large", "horizontal"]}[profile]
    x = 0
    while x < W:
        kind = rng.choice(kinds)
        bw = min(W - x, rng.randint(8, 24))
        if kind == "large" and bw < delta_w:
            kind = "small"
        if kind == "horizontal" and bw < delta_w:
            kind = "medium"
        if kind in ("tall", "wide", "medium", "small"):
            lo, hi = {"tall": (3 * top // 4 + 1, top), "wide": (3 * top // 4 + 1, top),
                      "medium": (top // 2 + 1, 3 * top // 4), "small": (top // 4 + 1, top // 2)}[kind]
            hb = g * rng.randint(-(-lo // g), hi // g)
            layers = {"tall": 3, "wide": 2, "medium": 2, "small": 1}[kind]
            for layer in range(layers):
                base = g * ((layer * hb // layers) // g)
                for _ in range(3 * bw):
                    h = rng.choice([t for t in tall_hs if t <= hb] or [0])
                    if not h:
                        break
                    w = rng.randint(1, min(bw, delta_w - 1)) if kind == "wide" else rng.randint(1, min(bw, 4))
                    xx = rng.randint(x, x + bw - w)
                    yy = g * rng.randint(0, (hb - h) // g) if kind in ("medium", "small") else min(base, hb - h)
                    if kind == "small":
                        yy = 0
                    put(w, h, xx, yy)
            # vertical items fill the gaps on the grid
            for _ in range(6 * bw):
                h = rng.choice(vert_hs)
                w = rng.randint(1, max(1, min(bw, math.floor(p.mu * W))))
                xx = rng.randint(x, x + bw - w)
                yy = g * rng.randint(0, max(0, (hb - h) // g))
                if yy + h <= hb:
                    put(w, h, xx, yy)
        elif kind == "large":
            h = g * rng.randint(T // (4 * g) + 1, top // (2 * g))
            w = rng.randint(delta_w, bw)
            put(w, h, x, 0)
            hy = h
            while hy + 2 <= top and rng.random() < 0.8:
                hh = rng.randint(1, max(1, int(p.mu * T)))
                if not put(rng.randint(delta_w, w), hh, x, hy):
                    break
                hy += hh
        else:
            hy = 0
            while hy + 4 <= top and rng.random() < 0.9:
                hh = rng.randint(1, max(1, int(p.mu * T)))
                if not put(rng.randint(delta_w, bw), hh, x, hy):
                    break
                hy += hh
        x += bw
    inst = Instance(W, tuple(Item(f"i{k}", w, h) for k, (_, _, w, h) in enumerate(placed)))
    pk = Packing.build(inst, (Placement(f"i{k}", x, y) for k, (x, y, _, _) in enumerate(placed)))
    return RoundedPacking(inst, pk, p)


def tiny_hint_case(seed, W=None, T=32):
    """A few tall, large and horizontal items packed on the grid of a small
    strip, small enough for the exact oracle. Returns a RoundedPacking with
    eps = delta = 1/4 and mu = 1/16."""
    from .classify import Params
    from .restructure.structure import RoundedPacking

    if T % 32:
        raise ValueError("T must be a multiple of 32")
    rng = _rng(seed)
    eps = Fraction(1, 4)
    p = Params(eps, eps, Fraction(1, 16), T, f_exponent=2)
    g = T // 16
    W = W or rng.randint(8, 16)
    delta_w = -(-W // 4)
    top = T + T // 2
    cv = _Canvas(W, top)
    placed = []

    def put(w, h, x, y):
        if cv.free(x, y, w, h):
            cv.fill(x, y, w, h)
            placed.append((x, y, w, h))
            return True
        return False

    x = 0
    for _ in range(rng.randint(1, 3)):
        w = rng.randint(1, delta_w - 1) if delta_w > 1 else 1
        h = g * rng.randint(T // (2 * g), T // g)
        if put(w, h, x, 0):
            x += w
    lw = rng.randint(delta_w, max(delta_w, W - x))
    if x + lw <= W:
        h = g * rng.randint(T // (4 * g) + 1, 3 * T // (4 * g))
        put(lw, h, x, 0)
        hy = h
        for _ in range(rng.randint(0, 2)):
            hh = rng.randint(1, int(p.mu * T))
            if put(rng.randint(delta_w, lw), hh, x, hy):
                hy += hh
    inst = Instance(W, tuple(Item(f"i{k}", w, h) for k, (_, _, w, h) in enumerate(placed)))
    pk = Packing.build(inst, (Placement(f"i{k}", x, y) for k, (x, y, _, _) in enumerate(placed)))
    return RoundedPacking(inst, pk, p)
