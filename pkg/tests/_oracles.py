"""Independent brute-force references used by the tests.

None of these import the code under test for the search itself; they are
slow and only meant for tiny inputs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


def grid_feasible(dims, W, H, allow_rotation=False):
    """Can the (w, h) rectangles be packed into W x H? Exhaustive search over
    grid positions: the lowest, leftmost free cell is either covered by the
    lower-left corner of some remaining item or declared waste."""
    if W * H > 62:
        raise ValueError("grid too large for the bitmask oracle")
    if sum(w * h for w, h in dims) > W * H:
        return False
    kinds = sorted(set(dims))
    start = tuple(dims.count(k) for k in kinds)
    full = (1 << (W * H)) - 1
    free_cells = W * H

    def mask_of(x, y, w, h):
        if x + w > W or y + h > H:
            return None
        m = 0
        for r in range(y, y + h):
            m |= ((1 << w) - 1) << (r * W + x)
        return m

    @lru_cache(maxsize=None)
    def go(occ, left):
        if not any(left):
            return True
        if occ == full:
            return False
        area = sum(c * k[0] * k[1] for c, k in zip(left, kinds))
        if area > free_cells - bin(occ).count("1"):
            return False
        cell = (~occ & full)
        cell = (cell & -cell).bit_length() - 1
        x, y = cell % W, cell // W
        for i, (w, h) in enumerate(kinds):
            if not left[i]:
                continue
            nl = left[:i] + (left[i] - 1,) + left[i + 1:]
            for ww, hh in {(w, h), (h, w)} if allow_rotation else {(w, h)}:
                m = mask_of(x, y, ww, hh)
                if m is not None and not (m & occ) and go(occ | m, nl):
                    return True
        return go(occ | (1 << cell), left)

    return go(0, start)


def brute_opt(dims, W, H_cap, allow_rotation=False):
    """Smallest H <= H_cap with a packing, or None."""
    for H in range(1, H_cap + 1):
        if grid_feasible(list(dims), W, H, allow_rotation):
            return H
    return None


def assignment_feasible(boxes, items):
    """boxes {h: [widths]}, items (id, w, h): try every assignment."""
    choices = []
    for _, w, h in items:
        if h not in boxes or not boxes[h]:
            return False
        choices.append([(h, k) for k in range(len(boxes[h]))])
    for combo in itertools.product(*choices):
        load = {}
        for (_, w, _), key in zip(items, combo):
            load[key] = load.get(key, 0) + w
        if all(v <= boxes[h][k] for (h, k), v in load.items()):
            return True
    return not items


def slot_feasible(option_lists, tall_boxes, group_caps, small_cap, medium_cap):
    """Every combination of options and concrete boxes; options as produced
    for the slot programs: ('box', h, w), ('group', g, h), ('small', a),
    ('medium', a)."""
    expanded = []
    for opts in option_lists:
        ex = []
        for opt in opts:
            if opt[0] == "box":
                ex += [("box", opt[1], k, opt[2]) for k in range(len(tall_boxes.get(opt[1], [])))]
            else:
                ex.append(opt)
        if not ex:
            return False
        expanded.append(ex)
    for combo in itertools.product(*expanded):
        load, groups, a_s, a_m = {}, {}, Fraction(0), Fraction(0)
        for opt in combo:
            if opt[0] == "box":
                load[(opt[1], opt[2])] = load.get((opt[1], opt[2]), 0) + opt[3]
            elif opt[0] == "group":
                groups[opt[1]] = groups.get(opt[1], 0) + opt[2]
            elif opt[0] == "small":
                a_s += opt[1]
            else:
                a_m += opt[1]
        if any(v > tall_boxes[h][k] for (h, k), v in load.items()):
            continue
        if any(v > group_caps[g] for g, v in groups.items()):
            continue
        if a_s <= small_cap and a_m <= medium_cap:
            return True
    return False


def lp_vertices(A, b):
    """All basic feasible solutions of A x = b, x >= 0 (dense, exact).

    All-zero rows are dropped (or make the system infeasible); other rank
    deficiencies are not handled."""
    if any(not any(row) and v for row, v in zip(A, b)):
        return set()
    keep = [r for r, row in enumerate(A) if any(row)]
    A, b = [A[r] for r in keep], [b[r] for r in keep]
    m, n = len(A), len(A[0]) if A else 0
    out = set()
    for cols in itertools.combinations(range(n), m):
        M = [[Fraction(A[r][c]) for c in cols] + [Fraction(b[r])] for r in range(m)]
        ok = True
        for c in range(m):
            piv = next((r for r in range(c, m) if M[r][c] != 0), None)
            if piv is None:
                ok = False
                break
            M[c], M[piv] = M[piv], M[c]
            for r in range(m):
                if r != c and M[r][c] != 0:
                    f = M[r][c] / M[c][c]
                    M[r] = [a - f * bb for a, bb in zip(M[r], M[c])]
        if not ok:
            continue
        x = [M[r][m] / M[r][r] for r in range(m)]
        if all(v >= 0 for v in x):
            sol = [Fraction(0)] * n
            for c, v in zip(cols, x):
                sol[c] = v
            out.add(tuple(sol))
    return out
