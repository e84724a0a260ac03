"""Exact feasibility search for packing rectangles into a W x H box.

Cells are scanned row by row; the lowest, leftmost free cell is either the
lower-left corner of some remaining item or stays empty. Every packing on the
integer grid can be reached this way, so a failed search is a proof of
infeasibility (unless the node budget ran out).
"""

from __future__ import annotations

import sys


class BudgetExhausted(Exception):
    pass


def fits_in_box(dims, W, H, allow_rotation=False, node_limit=2_000_000):
    """Return a list of (x, y, rotated) per input item, or None if no packing exists.

    ``dims`` is a sequence of (w, h). Raises BudgetExhausted when the node
    budget runs out before the question is settled.
    """
    n = len(dims)
    if n == 0:
        return []
    area = sum(w * h for w, h in dims)
    if area > W * H:
        return None
    options = []
    for w, h in dims:
        opts = []
        if w <= W and h <= H:
            opts.append((w, h, False))
        if allow_rotation and w != h and h <= W and w <= H:
            opts.append((h, w, True))
        if not opts:
            return None
        options.append(opts)

    # identical items are placed in index order to avoid symmetric branches
    kinds: dict[tuple, list[int]] = {}
    for i, (w, h) in enumerate(dims):
        key = (min(w, h), max(w, h)) if allow_rotation else (w, h)
        kinds.setdefault(key, []).append(i)
    kind_of = {}
    for members in kinds.values():
        for pos, i in enumerate(members):
            kind_of[i] = (members, pos)

    full = (1 << W) - 1
    rows = [0] * H
    placed = [None] * n
    used = [False] * n
    slack = W * H - area
    remaining = area
    nodes = 0

    def first_free(start_row):
        for r in range(start_row, H):
            if rows[r] != full:
                row = rows[r]
                c = 0
                while row >> c & 1:
                    c += 1
                return r, c
        return None

    def can_place(x, y, w, h):
        if x + w > W or y + h > H:
            return False
        mask = ((1 << w) - 1) << x
        for r in range(y, y + h):
            if rows[r] & mask:
                return False
        return True

    def put(x, y, w, h, on):
        mask = ((1 << w) - 1) << x
        for r in range(y, y + h):
            if on:
                rows[r] |= mask
            else:
                rows[r] &= ~mask

    def dfs(start_row, waste):
        nonlocal nodes
        if remaining == 0:
            return True
        nodes += 1
        if nodes > node_limit:
            raise BudgetExhausted()
        if waste > slack:
            return False
        cell = first_free(start_row)
        if cell is None:
            return False
        y, x = cell
        # width of the free run starting at (x, y)
        run = 0
        while x + run < W and not rows[y] >> (x + run) & 1:
            run += 1
        tried = set()
        for i in range(n):
            if used[i]:
                continue
            members, pos = kind_of[i]
            if pos > 0 and not used[members[pos - 1]]:
                continue
            for w, h, rot in options[i]:
                if w > run or (w, h, rot, members[0]) in tried:
                    continue
                tried.add((w, h, rot, members[0]))
                if not can_place(x, y, w, h):
                    continue
                put(x, y, w, h, True)
                used[i] = True
                placed[i] = (x, y, rot)
                _take(w * h)
                ok = dfs(y, waste)
                _take(-w * h)
                used[i] = False
                put(x, y, w, h, False)
                if ok:
                    placed[i] = (x, y, rot)
                    return True
                placed[i] = None
        # leave the cell empty
        rows[y] |= 1 << x
        ok = dfs(y, waste + 1)
        rows[y] &= ~(1 << x)
        return ok

    def _take(a):
        nonlocal remaining
        remaining -= a

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, slack + n + 200))
    try:
        found = dfs(0, 0)
    finally:
        sys.setrecursionlimit(limit)
    return list(placed) if found else None
