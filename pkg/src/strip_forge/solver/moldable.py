"""Moldable jobs on contiguous machines."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from ..baselines import pack_into_box
from ..core import Instance, Item, Packing, Placement
from .dp import DPInfeasible, SlotSpec, _concrete_boxes, _run_slot_dp
from .oracle import OracleLimits, exact_oracle


@dataclass(frozen=True)
class Job:
    id: str
    allotments: tuple  # ((machines, time), ...) sorted by machines

    def __post_init__(self):
        al = tuple(sorted((int(i), int(t)) for i, t in self.allotments))
        if not al:
            raise ValueError(f"job {self.id!r} has no allotment")
        if any(i < 1 or t < 1 for i, t in al):
            raise ValueError(f"job {self.id!r}: machines and times must be >= 1")
        if len({i for i, _ in al}) != len(al):
            raise ValueError(f"job {self.id!r}: repeated machine count")
        object.__setattr__(self, "allotments", al)

    @property
    def machines(self):
        return [i for i, _ in self.allotments]

    def time(self, i):
        return dict(self.allotments)[i]

    def work(self, i):
        return i * self.time(i)

    def is_monotone(self) -> bool:
        """Times nonincreasing and work nondecreasing in the machine count."""
        al = self.allotments
        return all(t1 >= t2 and i1 * t1 <= i2 * t2 for (i1, t1), (i2, t2) in zip(al, al[1:]))


def psi(job: Job, p):
    """Fewest machines giving processing time at most p."""
    for i, t in job.allotments:
        if t <= p:
            return i
    return None


@dataclass(frozen=True)
class MoldableEstimate:
    tau: Fraction
    allotment: dict  # job id -> machines

    @property
    def U(self) -> Fraction:
        return 2 * self.tau

    @property
    def T(self) -> Fraction:
        return self.tau


def _min_work(job, d):
    best = None
    for i, t in job.allotments:
        if t <= d and (best is None or (i * t, i) < (best[0], best[1])):
            best = (i * t, i)
    return best


def moldable_estimate(jobs, m) -> MoldableEstimate:
    """tau with OPT in [tau, 2*tau].

    For every candidate time d each job takes its least-work allotment among
    those finishing within d; tau is the minimum over d of
    max(d, total work / m).
    """
    jobs = [Job(j.id, tuple((i, t) for i, t in j.allotments if i <= m)) for j in jobs]
    cands = sorted({t for j in jobs for _, t in j.allotments})
    best = None
    for d in cands:
        picks = {}
        work = 0
        for j in jobs:
            mw = _min_work(j, d)
            if mw is None:
                break
            work += mw[0]
            picks[j.id] = mw[1]
        else:
            val = max(Fraction(d), Fraction(work, m))
            if best is None or val < best[0]:
                best = (val, picks)
    if best is None:
        raise ValueError("some job has no allotment within the machine count")
    return MoldableEstimate(best[0], best[1])


def schedule_allotment(jobs, m, allotment, H):
    """Contiguous schedule of height <= H for a fixed allotment, or None."""
    items = [Item(j.id, allotment[j.id], j.time(allotment[j.id])) for j in jobs]
    pos = pack_into_box(items, m, H)
    if pos is None:
        return None
    inst = Instance(m, items)
    return inst, Packing.build(inst, (Placement(i, x, y) for i, (x, y) in pos.items()))


def moldable_oracle(jobs, m, limits: OracleLimits | None = None):
    """Exact makespan by enumerating allotments: (OPT, allotment, packing)."""
    best = None
    options = [[(i, t) for i, t in j.allotments if i <= m] for j in jobs]
    for combo in itertools.product(*options):
        hmax = max(t for _, t in combo)
        area = sum(i * t for i, t in combo)
        lb = max(hmax, -(-area // m))
        if best is not None and lb >= best[0]:
            continue
        inst = Instance(m, tuple(Item(j.id, i, t) for j, (i, t) in zip(jobs, combo)))
        opt, pk = exact_oracle(inst, limits)
        if best is None or opt < best[0]:
            best = (opt, {j.id: i for j, (i, _) in zip(jobs, combo)}, pk)
    return best


def moldable_options(job: Job, p, m, spec: SlotSpec, n):
    """The five ways a job may enter the program, each as a slot option."""
    eps, delta, mu, T = p.epsilon, p.delta, p.mu, p.T
    opts = []
    for P in sorted(spec.tall_boxes):
        i = psi(job, P)
        if i is None:
            continue
        if P > Fraction(T, 4) and i < delta * m:
            opts.append((("tall", i), ("box", P, i)))
        elif delta * T < P <= Fraction(T, 4) and i <= mu * m:
            opts.append((("vertical", i), ("box", P, i)))
    gw = spec.group_widths
    for g in range(len(gw) - 1):
        cand = [(t, i) for i, t in job.allotments if gw[g] <= i <= gw[g + 1]]
        if cand:
            t, i = min(cand)
            if t <= mu * T:
                opts.append((("horizontal", i), ("group", g + 1, math.ceil(n * t / (eps * T)))))
    cand = [(t, i) for i, t in job.allotments if i < mu * m]
    if cand:
        t, i = min(cand)
        if t < mu * (1 + eps) ** 2 * T:
            opts.append((("small", i), ("small", i * t)))
    cand = [(t, i) for i, t in job.allotments if mu * m <= i <= delta * m]
    if cand:
        t, i = min(cand)
        if t < eps * T:
            opts.append((("medium", i), ("medium", i * t)))
    return opts


def dp_moldable(jobs, m, p, spec: SlotSpec, state_cap=2_000_000):
    """Commit every job to one slot. Returns {job id: (branch, machines, slot)}
    where slot is ('box', P, box index), ('group', g), ('small',) or ('medium',);
    or DPInfeasible."""
    n = len(jobs)
    choices = []
    for j in jobs:
        opts = moldable_options(j, p, m, spec, n)
        if not opts:
            return DPInfeasible(f"job {j.id} fits no slot")
        choices.append(opts)
    steps = _run_slot_dp(choices, spec, state_cap)
    if isinstance(steps, DPInfeasible):
        return steps
    boxes = _concrete_boxes(steps, spec)
    out = {}
    for k, j in enumerate(jobs):
        (branch, machines), opt, b = steps[k]
        if opt[0] == "box":
            slot = ("box", opt[1], boxes[k])
        elif opt[0] == "group":
            slot = ("group", b)
        else:
            slot = (opt[0],)
        out[j.id] = (branch, machines, slot)
    return out
