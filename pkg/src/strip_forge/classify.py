"""Item classes, the delta/mu search, geometric and arithmetic rounding."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, Item, Packing, Placement


def frac(v) -> Fraction:
    """Fraction from int, Fraction or a "p/q" string."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


def is_power_of(x: Fraction, base: Fraction) -> bool:
    if x <= 0 or x > 1:
        return False
    p = Fraction(1)
    while p > x:
        p *= base
    return p == x


def largest_power_at_most(base: Fraction, x: Fraction) -> Fraction:
    """Largest base**k (k >= 1) that is <= x, for 0 < base < 1."""
    p = base
    while p > x:
        p *= base
    return p


def f_value(epsilon, exponent: int, divisor: int) -> Fraction:
    return frac(epsilon) ** exponent / divisor


@dataclass(frozen=True)
class Params:
    epsilon: Fraction
    delta: Fraction
    mu: Fraction
    T: int
    f_exponent: int = 13
    f_divisor: int = 1
    N: int | None = None

    def __post_init__(self):
        for name in ("epsilon", "delta", "mu"):
            object.__setattr__(self, name, frac(getattr(self, name)))
        eps, delta, mu = self.epsilon, self.delta, self.mu
        # eps up to 1/2 is accepted for the rounding sweeps; the solver uses <= 1/4
        if not (0 < mu < delta <= eps <= Fraction(1, 2)):
            raise ValueError("need 0 < mu < delta <= epsilon <= 1/2")
        if eps.numerator != 1:
            raise ValueError("1/epsilon must be an integer")
        if not is_power_of(delta, eps):
            raise ValueError("delta must be a power of epsilon")
        if self.f.numerator != 1:
            raise ValueError("1/f(epsilon) must be an integer")
        if not isinstance(self.T, int) or self.T < 1:
            raise ValueError("T must be a positive integer")
        if self.N is None:
            object.__setattr__(self, "N", math.ceil((1 + 3 * eps) / eps**2))

    @property
    def f(self) -> Fraction:
        return f_value(self.epsilon, self.f_exponent, self.f_divisor)

    @property
    def H(self) -> Fraction:
        return (1 + 2 * self.epsilon) * self.T

    def with_T(self, T: int) -> "Params":
        return Params(self.epsilon, self.delta, self.mu, T, self.f_exponent, self.f_divisor, self.N)


class ItemClass(enum.Enum):
    LARGE = "Large"
    TALL = "Tall"
    VERTICAL = "Vertical"
    MEDIUM_VERTICAL = "MediumVertical"
    HORIZONTAL = "Horizontal"
    SMALL = "Small"
    MEDIUM = "Medium"


def classify_dims(w: int, h: int, p: Params, W: int) -> ItemClass:
    eps, delta, mu, T = p.epsilon, p.delta, p.mu, p.T
    tall_h = (Fraction(1, 4) + eps) * T
    # checked in this order; the class definitions touch at w = delta*W
    if h > delta * T and w >= delta * W:
        return ItemClass.LARGE
    if h >= tall_h and w < delta * W:
        return ItemClass.TALL
    if delta * T <= h < tall_h and w <= mu * W:
        return ItemClass.VERTICAL
    if eps * T <= h < tall_h and mu * W < w <= delta * W:
        return ItemClass.MEDIUM_VERTICAL
    if h <= mu * T and w >= delta * W:
        return ItemClass.HORIZONTAL
    if h <= mu * T and w <= mu * W:
        return ItemClass.SMALL
    return ItemClass.MEDIUM


def classify(item: Item, p: Params, W: int) -> ItemClass:
    if item.width > W:
        raise ValueError(f"item {item.id!r} wider than the strip")
    return classify_dims(item.width, item.height, p, W)


def classify_all(items, p: Params, W: int) -> dict[ItemClass, list[Item]]:
    groups = {c: [] for c in ItemClass}
    for it in items:
        groups[classify(it, p, W)].append(it)
    return groups


# ---- delta / mu -------------------------------------------------------------

class DeltaMuNotFound(RuntimeError):
    """No index in the pigeonhole range worked; the guess T is below area/W."""


def _medium_area(items, eps, delta, mu, T, W) -> int:
    tall_h = (Fraction(1, 4) + eps) * T
    total = 0
    for it in items:
        w, h = it.width, it.height
        if h > delta * T and w >= delta * W:
            continue
        if h >= tall_h and w < delta * W:
            continue
        if delta * T <= h < tall_h and w <= mu * W:
            continue
        if eps * T <= h < tall_h and mu * W < w <= delta * W:
            total += it.area
            continue
        if h <= mu * T and (w >= delta * W or w <= mu * W):
            continue
        total += it.area
    return total


def medium_area(items, p: Params, W: int) -> int:
    """Area of the Medium and MediumVertical classes."""
    return _medium_area(items, p.epsilon, p.delta, p.mu, p.T, W)


@dataclass(frozen=True)
class DeltaMu:
    delta: Fraction
    mu: Fraction
    index: int
    sigma: Fraction  # the unadjusted delta

    def __iter__(self):
        return iter((self.delta, self.mu))


def find_delta_mu(instance: Instance, epsilon, T: int, f_exponent: int = 13, f_divisor: int = 1) -> DeltaMu:
    eps = frac(epsilon)
    f = f_value(eps, f_exponent, f_divisor)
    if f.numerator != 1:
        raise ValueError("1/f(epsilon) must be an integer")
    W = instance.strip_width
    bound = f * W * T
    sigma = f
    for i in range(2 * f.denominator):
        nxt = sigma * sigma * f
        if _medium_area(instance.items, eps, sigma, nxt, T, W) <= bound:
            delta = largest_power_at_most(eps, sigma)
            if delta <= nxt or _medium_area(instance.items, eps, delta, nxt, T, W) > bound:
                raise AssertionError("delta adjustment broke the area bound")
            return DeltaMu(delta, nxt, i, sigma)
        sigma = nxt
    raise DeltaMuNotFound(f"no delta/mu pair for T={T}")


# ---- geometric rounding -----------------------------------------------------

@dataclass(frozen=True)
class RoundedItem:
    base: Item
    rounded_height: int
    level: int
    multiplier: int

    @property
    def id(self):
        return self.base.id

    @property
    def width(self):
        return self.base.width


def height_level(h, eps: Fraction, T) -> int:
    """The l with eps^l * T <= h < eps^(l-1) * T (l = 0 only for h = T)."""
    l, lo = 0, Fraction(T)
    while h < lo:
        l += 1
        lo *= eps
    return l


def round_height(h: int, eps: Fraction, T: int) -> tuple[int, int, int]:
    """(rounded height, level, multiplier) for one height."""
    if h > T:
        raise ValueError(f"height {h} exceeds T={T}")
    l = height_level(h, eps, T)
    pitch = eps ** (l + 1) * T
    if pitch.denominator != 1:
        raise ValueError(f"pitch eps^{l + 1}*T is not integral; scale T first")
    k = -(-h // int(pitch))
    if k * eps * eps == 1:
        # reached eps^(l-1) T: same height, one level up
        l -= 1
        k = int(1 / eps)
    return k * int(eps ** (l + 1) * T), l, k


def round_tall_heights(items, p: Params) -> list[RoundedItem]:
    out = []
    for it in items:
        r, l, k = round_height(it.height, p.epsilon, p.T)
        out.append(RoundedItem(it, r, l, k))
    return out


# ---- arithmetic rounding ----------------------------------------------------

@dataclass(frozen=True)
class ScaleInfo:
    unit: Fraction

    def y_to_original(self, y) -> int:
        return math.ceil(Fraction(y) * self.unit)

    def packing_to_original(self, original: Instance, scaled_packing: Packing) -> Packing:
        pl = [Placement(q.item_id, q.x, self.y_to_original(q.y), q.rotated) for q in scaled_packing.placements]
        return Packing.build(original, pl)


def arithmetic_round(instance: Instance, epsilon, T: int) -> tuple[Instance, ScaleInfo]:
    n = len(instance.items)
    if n < 1:
        raise ValueError("need at least one item")
    unit = frac(epsilon) * T / n
    items = tuple(Item(it.id, it.width, math.ceil(it.height / unit)) for it in instance.items)
    return Instance(instance.strip_width, items), ScaleInfo(unit)
