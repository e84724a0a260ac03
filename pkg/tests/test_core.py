import random

from strip_forge.core import (
    Instance,
    Item,
    Packing,
    Placement,
    find_overlaps,
    lower_bound,
    packing_height,
    rects_overlap,
    total_area,
    validate_packing,
)

import pytest


def pk(inst, *xy):
    return Packing.build(inst, [Placement(it.id, x, y) for it, (x, y) in zip(inst.items, xy)])


def test_single_full_width_item_is_clean():
    inst = Instance.from_dims(10, [(10, 5)])
    p = pk(inst, (0, 0))
    assert p.height == 5
    assert validate_packing(inst, p).ok


def test_identical_positions_overlap():
    inst = Instance.from_dims(10, [(5, 5), (5, 5)])
    rep = validate_packing(inst, pk(inst, (0, 0), (0, 0)))
    assert rep.kinds() == {"Overlap"}


def test_out_of_bounds_on_the_right():
    inst = Instance.from_dims(10, [(6, 1)])
    assert validate_packing(inst, pk(inst, (5, 0))).kinds() == {"OutOfBounds"}


def test_shared_edges_are_allowed():
    inst = Instance.from_dims(4, [(2, 2), (2, 2), (4, 1)])
    assert validate_packing(inst, pk(inst, (0, 0), (2, 0), (0, 2))).ok


def test_missing_duplicate_unknown_and_height():
    inst = Instance.from_dims(4, [(2, 2), (2, 2)])
    a, b = inst.items
    rep = validate_packing(inst, Packing((Placement(a.id, 0, 0), Placement(a.id, 2, 0), Placement("zz", 0, 5)), 2))
    assert {"Missing", "Duplicate", "UnknownItem"} <= rep.kinds()
    rep = validate_packing(inst, Packing((Placement(a.id, 0, 0), Placement(b.id, 2, 0)), 3))
    assert rep.kinds() == {"HeightMismatch"}


def test_rotation_flag_needs_permission():
    inst = Instance.from_dims(4, [(1, 3)])
    p = Packing.build(inst, [Placement("0", 0, 0, True)])
    assert p.height == 1
    assert validate_packing(inst, p).kinds() == {"RotationNotAllowed"}
    assert validate_packing(inst, p, allow_rotation=True).ok


def test_packing_height_examples():
    assert packing_height(Packing((), 0)) == 0
    inst = Instance.from_dims(5, [(1, 7)])
    assert packing_height(Packing((Placement("0", 0, 3),), 10), inst) == 10
    inst = Instance.from_dims(5, [(1, 4), (1, 2)])
    assert packing_height(pk(inst, (0, 0), (0, 4)), inst) == 6


def test_total_area_examples():
    assert total_area([]) == 0
    assert total_area(Instance.from_dims(5, [(3, 4)]).items) == 12
    assert total_area(Instance.from_dims(5, [(3, 4), (2, 5)]).items) == 22


def test_lower_bound_examples():
    assert lower_bound(Instance.from_dims(10, [(10, 5)])) == 5
    assert lower_bound(Instance.from_dims(10, [(5, 4)] * 4)) == 8
    assert lower_bound(Instance.from_dims(2, [(1, 3), (1, 1)])) == 3
    assert lower_bound(Instance(3)) == 0


def test_item_and_instance_invariants():
    with pytest.raises(ValueError):
        Item("a", 0, 1)
    with pytest.raises(TypeError):
        Item("a", 1.5, 1)
    with pytest.raises(ValueError):
        Instance(3, (Item("a", 4, 1),))
    with pytest.raises(ValueError):
        Instance(3, (Item("a", 1, 1), Item("a", 1, 1)))


def test_overlap_is_symmetric_and_irreflexive():
    r = random.Random(7)
    for _ in range(500):
        a = (r.randint(0, 5), r.randint(0, 5), r.randint(1, 4), r.randint(1, 4))
        b = (r.randint(0, 5), r.randint(0, 5), r.randint(1, 4), r.randint(1, 4))
        assert rects_overlap(a, b) == rects_overlap(b, a)
        cells_a = {(x, y) for x in range(a[0], a[0] + a[2]) for y in range(a[1], a[1] + a[3])}
        cells_b = {(x, y) for x in range(b[0], b[0] + b[2]) for y in range(b[1], b[1] + b[3])}
        assert rects_overlap(a, b) == bool(cells_a & cells_b)


def test_sweep_matches_all_pairs():
    r = random.Random(3)
    for _ in range(100):
        rects = [(r.randint(0, 9), r.randint(0, 9), r.randint(1, 4), r.randint(1, 4)) for _ in range(12)]
        pairs = [(i, j) for i in range(12) for j in range(i + 1, 12) if rects_overlap(rects[i], rects[j])]
        assert find_overlaps(rects) == pairs
