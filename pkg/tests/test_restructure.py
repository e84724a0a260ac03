from fractions import Fraction as F

import pytest

from _checks import grid_reorder_violations, tall_box_violations
from strip_forge.core import Instance, Packing, Placement
from strip_forge.generators import (
    grid_packing_case,
    medium_box_case,
    rounded_case,
    small_box_case,
    tall_box_case,
    two_sided_case,
)
from strip_forge.restructure import (
    AlignmentError,
    BoxContents,
    BoxKind,
    BorderViolation,
    build_structure,
    check_partition,
    check_structure,
    make_grid_packing,
    partition_into_boxes,
    reorder_medium_box,
    reorder_small_box,
    reorder_tall_box,
    simple_reorder,
    two_shelf_reorder,
)
from strip_forge.restructure.grid import Slice, TallPlacement


def _pk(inst, xy):
    return Packing.build(inst, [Placement(str(i), x, y) for i, (x, y) in enumerate(xy)])


def test_grid_packing_slices_low_items():
    inst = Instance.from_dims(4, [(2, 4), (2, 1), (1, 2)])
    gp = make_grid_packing(inst, _pk(inst, [(0, 0), (2, 0), (2, 1)]), 8, 4)
    assert [t.id for t in gp.tall] == ["0"]
    assert gp.slice_totals() == {"1": 2, "2": 2}
    assert gp.columns[2] == (Slice("1", F(0), F(1)), Slice("2", F(1), F(2)))
    assert gp.overlaps() == []


def test_grid_packing_rejects_off_grid_tall_item():
    inst = Instance.from_dims(4, [(2, 3)])
    with pytest.raises(AlignmentError):
        make_grid_packing(inst, _pk(inst, [(0, 1)]), 8, 4)


def test_grid_resolution_defaults_to_coarsest():
    inst = Instance.from_dims(4, [(2, 4), (2, 6)])
    gp = make_grid_packing(inst, _pk(inst, [(0, 0), (2, 2)]), 8)
    assert gp.N == 4


def test_simple_reorder_groups_equal_heights():
    # two tall items of equal height in separate columns end up adjacent
    inst = Instance.from_dims(6, [(1, 4), (1, 4), (4, 1)])
    gp = make_grid_packing(inst, _pk(inst, [(0, 0), (5, 0), (1, 0)]), 8, 4)
    cs, out = simple_reorder(gp)
    xs = sorted(t.x for t in out.tall)
    assert xs[1] - xs[0] == 1
    assert len(cs.tall_containers) == 1
    assert out.height <= 10


@pytest.mark.parametrize("seed", range(12))
def test_simple_reorder_bounds(seed):
    assert grid_reorder_violations(*grid_packing_case(seed)) == []


@pytest.mark.parametrize("seed", range(12))
def test_reorder_tall_box_bounds(seed):
    box, H, N, unm = tall_box_case(seed)
    assert tall_box_violations(box, H, N, unm) == []


def test_tall_box_rejects_unlisted_crossing_item():
    box = BoxContents(4, F(8), (TallPlacement("a", -1, F(0), 2, F(4)),))
    with pytest.raises(BorderViolation):
        reorder_tall_box(box, 8, 8, unmovables=[])


def test_tall_box_needs_enough_height():
    with pytest.raises(ValueError):
        reorder_tall_box(BoxContents(4, F(6)), 8, 8)


@pytest.mark.parametrize("seed", range(8))
def test_two_shelf_orders_both_sides(seed):
    region, unm = two_sided_case(seed)
    res = two_shelf_reorder(region, unm)
    c = res.contents
    assert c.overlaps() == []
    fixed = {t.id: t for t in region.tall if t.id in unm}
    assert fixed == {t.id: t for t in c.tall if t.id in unm}
    assert sorted(t.id for t in c.tall) == sorted(t.id for t in region.tall)


@pytest.mark.parametrize("seed", range(8))
def test_medium_and_small_boxes(seed):
    box, H, N = medium_box_case(seed)
    res, extra = reorder_medium_box(box, H, N)
    assert res.contents.overlaps() == []
    totals = {}
    for o, h in res.contents.slice_multiset():
        totals[o] = totals.get(o, 0) + h
    if extra is not None:
        assert extra.h == F(H, 4)
        for o, _, _, h in extra.contents:
            totals[o] = totals.get(o, 0) + h
    before = {}
    for o, h in box.slice_multiset():
        before[o] = before.get(o, 0) + h
    assert totals == before
    box, H, N = small_box_case(seed)
    res = reorder_small_box(box, H, N)
    assert res.contents.overlaps() == []
    assert all(t.y == 0 for t in res.contents.tall)


@pytest.mark.parametrize("profile", ["tall", "wide", "medium", "small", "mixed"])
def test_partition_and_structure(profile):
    for seed in range(4):
        rp = rounded_case(seed, profile)
        part = partition_into_boxes(rp)
        assert check_partition(rp, part).ok
        assert {b.kind for b in part.boxes} <= {BoxKind.LARGE_ITEM, BoxKind.HORIZONTAL, BoxKind.TALL_VERTICAL}
        sp = build_structure(rp, part)
        assert sp.validate().ok
        assert check_structure(sp).ok
        assert sp.height <= sp.bound


def test_check_partition_flags_overlapping_boxes():
    rp = rounded_case(1, "mixed")
    part = partition_into_boxes(rp)
    part.boxes.append(part.boxes[0])
    rep = check_partition(rp, part)
    assert not rep.ok
