"""Binary search over height guesses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..baselines import upper_bound_pack


@dataclass
class SearchResult:
    T: int | None
    result: object
    probes: int
    fallback: bool = False
    diagnostic: str = ""


def binary_search(lo: int, hi: int, probe) -> SearchResult:
    """Smallest T in [lo, hi] for which probe(T) is not None (assuming monotone)."""
    best, best_T, probes = None, None, 0
    while lo <= hi:
        mid = (lo + hi) // 2
        probes += 1
        res = probe(mid)
        if res is not None:
            best, best_T, hi = res, mid, mid - 1
        else:
            lo = mid + 1
    return SearchResult(best_T, best, probes)


def guess_range(n: int, eps) -> tuple[int, int]:
    """Height guesses in scaled units, n/eps .. 2n/eps + n."""
    eps = Fraction(eps)
    return math.ceil(n / eps), math.floor(2 * n / eps + n)


def dual_approx_search(instance, eps, probe, lo=None, hi=None) -> SearchResult:
    """Binary search with the 2T packing as the fallback when every probe fails."""
    if lo is None or hi is None:
        lo, hi = guess_range(len(instance.items), eps)
    res = binary_search(lo, hi, probe)
    if res.result is None:
        packing, _ = upper_bound_pack(instance)
        return SearchResult(None, packing, res.probes, True, "all probes failed; 2T fallback used")
    return res
