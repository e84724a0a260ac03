"""Configuration LPs solved exactly over the rationals.

A configuration is a multiset of class sizes whose total fits a box's
capacity dimension. For every box the extents of its configurations sum to
the box's free dimension, and for every class the extents weighted by the
multiplicities sum to the class demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class UniverseOverflow(Exception):
    pass


@dataclass(frozen=True)
class Configuration:
    counts: tuple[tuple[int, int], ...]  # (size, count), sizes ascending, counts > 0

    @property
    def total(self) -> int:
        return sum(s * c for s, c in self.counts)

    def count(self, size) -> int:
        for s, c in self.counts:
            if s == size:
                return c
        return 0

    def sizes(self) -> list[int]:
        """Sizes with repetition, largest first."""
        out = []
        for s, c in sorted(self.counts, reverse=True):
            out.extend([s] * c)
        return out

    def __bool__(self):
        return bool(self.counts)


@dataclass(frozen=True)
class LPBox:
    capacity: int  # bounds a configuration's total
    extent: Fraction  # what the configurations of the box must add up to
    key: object = None


@dataclass
class ConfigSolution:
    entries: list  # (box index, Configuration, Fraction extent), nonzero only
    coverage: dict = field(default_factory=dict)
    rows: int = 0

    def for_box(self, b):
        return [(c, x) for i, c, x in self.entries if i == b]


@dataclass(frozen=True)
class LPInfeasible:
    reason: str = "no feasible configuration solution"

    def __bool__(self):
        return False


def enumerate_configurations(sizes, capacity, cap=10**6) -> list[Configuration]:
    sizes = sorted(set(sizes))
    out: list[Configuration] = []

    def rec(i, left, acc):
        if i == len(sizes):
            out.append(Configuration(tuple(acc)))
            if len(out) > cap:
                raise UniverseOverflow(f"more than {cap} configurations")
            return
        s = sizes[i]
        for c in range(left // s, -1, -1):
            rec(i + 1, left - c * s, acc + [(s, c)] if c else acc)

    rec(0, capacity, [])
    out.sort(key=lambda c: (c.total, c.counts))
    return out


def _simplex_phase1(n_rows, columns, b):
    """Feasibility by the phase-1 revised simplex with Bland's rule.

    ``columns`` is a list of sparse columns ({row: coeff}); b >= 0.
    Returns {column index: value} for basic structural variables, or None.
    """
    m = n_rows
    n = len(columns)
    # variable ids: 0..n-1 structural, n..n+m-1 artificial
    basis = [n + i for i in range(m)]
    Binv = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    xb = [Fraction(v) for v in b]

    def cost(v):
        return 1 if v >= n else 0

    def column(v):
        if v >= n:
            return {v - n: Fraction(1)}
        return columns[v]

    while True:
        cb = [cost(v) for v in basis]
        y = [sum(cb[i] * Binv[i][j] for i in range(m) if cb[i]) for j in range(m)]
        entering = None
        in_basis = set(basis)
        for v in range(n + m):
            if v in in_basis:
                continue
            d = cost(v) - sum(y[r] * a for r, a in column(v).items())
            if d < 0:
                entering = v
                break
        if entering is None:
            break
        col = column(entering)
        u = [sum(Binv[i][r] * a for r, a in col.items()) for i in range(m)]
        leave, best = None, None
        for i in range(m):
            if u[i] > 0:
                ratio = xb[i] / u[i]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # unbounded cannot happen in phase 1
            raise AssertionError("phase 1 unbounded")
        piv = u[leave]
        Binv[leave] = [v / piv for v in Binv[leave]]
        xb[leave] = xb[leave] / piv
        for i in range(m):
            if i != leave and u[i]:
                f = u[i]
                Binv[i] = [a - f * c for a, c in zip(Binv[i], Binv[leave])]
                xb[i] -= f * xb[leave]
        basis[leave] = entering
    if any(v >= n and x != 0 for v, x in zip(basis, xb)):
        return None
    return {v: x for v, x in zip(basis, xb) if v < n}


def solve_config_lp(boxes, demands, config_universe_cap=10**6):
    """Basic feasible solution of the configuration LP, or LPInfeasible.

    ``boxes``: sequence of LPBox; ``demands``: {class size: total extent}.
    """
    boxes = list(boxes)
    classes = sorted(s for s, d in demands.items())
    for s in classes:
        if demands[s] < 0:
            raise ValueError("negative demand")
    row_of = {s: len(boxes) + k for k, s in enumerate(classes)}
    n_rows = len(boxes) + len(classes)
    columns, owner = [], []
    total = 0
    for bi, box in enumerate(boxes):
        fitting = [s for s in classes if s <= box.capacity]
        confs = enumerate_configurations(fitting, box.capacity, config_universe_cap)
        total += len(confs)
        if total > config_universe_cap:
            raise UniverseOverflow(f"more than {config_universe_cap} configurations")
        for c in confs:
            col = {bi: Fraction(1)}
            for s, k in c.counts:
                col[row_of[s]] = Fraction(k)
            columns.append(col)
            owner.append((bi, c))
    b = [Fraction(box.extent) for box in boxes] + [Fraction(demands[s]) for s in classes]
    if any(v < 0 for v in b):
        raise ValueError("negative extent")
    basic = _simplex_phase1(n_rows, columns, b)
    if basic is None:
        return LPInfeasible()
    entries = [(owner[j][0], owner[j][1], x) for j, x in sorted(basic.items()) if x != 0]
    coverage = {s: sum((c.count(s) * x for _, c, x in entries), Fraction(0)) for s in classes}
    return ConfigSolution(entries, coverage, n_rows)


def residuals(sol: ConfigSolution, boxes, demands) -> list[Fraction]:
    """Exact constraint residuals (all zero for a correct solution)."""
    out = []
    for bi, box in enumerate(boxes):
        out.append(sum((x for i, _, x in sol.entries if i == bi), Fraction(0)) - box.extent)
    for s in sorted(demands):
        out.append(sum((c.count(s) * x for _, c, x in sol.entries), Fraction(0)) - demands[s])
    return out
