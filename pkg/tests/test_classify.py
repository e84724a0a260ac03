import math
import random
from fractions import Fraction as F

import pytest

from strip_forge.classify import (
    ItemClass,
    Params,
    arithmetic_round,
    classify_dims,
    find_delta_mu,
    medium_area,
    round_height,
    round_tall_heights,
)
from strip_forge.core import Instance, Item

P1000 = Params(F(1, 10), F(1, 10), F(1, 100), 1000)


@pytest.mark.parametrize("w,h,cls", [
    (500, 500, ItemClass.LARGE),
    (50, 400, ItemClass.TALL),
    (50, 5, ItemClass.MEDIUM),
    (5, 200, ItemClass.VERTICAL),
    (50, 200, ItemClass.MEDIUM_VERTICAL),
    (500, 10, ItemClass.HORIZONTAL),
    (10, 10, ItemClass.SMALL),
])
def test_classify_examples(w, h, cls):
    assert classify_dims(w, h, P1000, 1000) is cls


def _brute_class(w, h, p, W):
    eps, d, m, T = p.epsilon, p.delta, p.mu, p.T
    th = (F(1, 4) + eps) * T
    hits = [
        (ItemClass.LARGE, h > d * T and w >= d * W),
        (ItemClass.TALL, h >= th and w < d * W),
        (ItemClass.VERTICAL, d * T <= h < th and w <= m * W),
        (ItemClass.MEDIUM_VERTICAL, eps * T <= h < th and m * W < w <= d * W),
        (ItemClass.HORIZONTAL, h <= m * T and w >= d * W),
        (ItemClass.SMALL, h <= m * T and w <= m * W),
    ]
    return [c for c, ok in hits if ok]


def test_classes_partition_the_plane():
    # the definitions overlap only on w = delta*W with h > delta*T (Large wins)
    for p, W in [(Params(F(1, 4), F(1, 4), F(1, 32), 64), 64), (Params(F(1, 4), F(1, 16), F(1, 64), 64), 64)]:
        for w in range(1, W + 1):
            for h in range(1, 2 * p.T + 1):
                c = classify_dims(w, h, p, W)
                raw = _brute_class(w, h, p, W)
                if raw:
                    assert c is raw[0]
                    assert len(raw) == 1 or (raw[0] is ItemClass.LARGE and w == p.delta * W)
                else:
                    assert c is ItemClass.MEDIUM


def test_params_rejects_inconsistent_values():
    with pytest.raises(ValueError):
        Params(F(1, 4), F(1, 8), F(1, 64), 10)  # delta not a power of eps
    with pytest.raises(ValueError):
        Params(F(1, 4), F(1, 4), F(1, 2), 10)  # mu > delta
    with pytest.raises(ValueError):
        Params(F(2, 7), F(2, 7), F(1, 64), 10)


def test_single_full_item_takes_first_pair():
    inst = Instance.from_dims(8, [(8, 16)])
    dm = find_delta_mu(inst, F(1, 2), 16, f_exponent=1)
    assert dm.index == 0 and (dm.delta, dm.mu) == (F(1, 2), F(1, 8))


def test_sequence_members_are_consecutive():
    eps = F(1, 2)
    seq = [eps]
    for _ in range(4):
        seq.append(seq[-1] ** 2 * eps)
    assert seq[:3] == [F(1, 2), F(1, 8), F(1, 128)]
    r = random.Random(3)
    for _ in range(30):
        inst = Instance.from_dims(64, [(r.randint(1, 64), r.randint(1, 32)) for _ in range(6)])
        dm = find_delta_mu(inst, eps, 32, f_exponent=1)
        assert dm.sigma == seq[dm.index] and dm.mu == seq[dm.index + 1]


def test_adversarial_medium_instance_moves_to_second_pair():
    W, T = 16, 16
    # widths in (W/8, W/2], height T/2: all medium-vertical at (1/2, 1/8), large at (1/8, 1/128)
    inst = Instance.from_dims(W, [(8, 8), (8, 8), (3, 8)])
    p0 = Params(F(1, 2), F(1, 2), F(1, 8), T, f_exponent=1)
    assert medium_area(inst.items, p0, W) == sum(it.area for it in inst.items) > W * T / 2
    dm = find_delta_mu(inst, F(1, 2), T, f_exponent=1)
    assert dm.index == 1 and dm.delta == F(1, 8) and dm.mu == F(1, 128)


@pytest.mark.parametrize("h,out", [(4, (4, 2, 2)), (5, (6, 2, 3)), (7, (8, 1, 2)), (16, (16, 0, 2))])
def test_round_height_examples(h, out):
    assert round_height(h, F(1, 2), 16) == out


def test_round_height_rejects_too_tall():
    with pytest.raises(ValueError):
        round_height(17, F(1, 2), 16)


def test_rounding_is_monotone_within_a_level():
    eps, T = F(1, 4), 256
    items = [Item(str(h), 1, h) for h in range(16, T + 1)]
    p = Params(eps, F(1, 16), F(1, 256), T, f_exponent=2)
    got = round_tall_heights(items, p)
    for a, b in zip(got, got[1:]):
        if a.level == b.level:
            assert a.rounded_height <= b.rounded_height
        assert a.rounded_height >= a.base.height


@pytest.mark.parametrize("n,T,h,scaled,unit", [(4, 8, 5, 5, 1), (4, 16, 5, 3, 2), (1, 2, 1, 1, 1)])
def test_arithmetic_round_examples(n, T, h, scaled, unit):
    inst = Instance.from_dims(10, [(1, h)] + [(1, 1)] * (n - 1))
    out, info = arithmetic_round(inst, F(1, 2), T)
    assert info.unit == unit and out.items[0].height == scaled


def test_arithmetic_round_maps_back_with_small_inflation():
    from strip_forge.baselines import nfdh
    from strip_forge.core import validate_packing

    r = random.Random(8)
    for _ in range(50):
        n = r.randint(1, 12)
        inst = Instance.from_dims(20, [(r.randint(1, 20), r.randint(1, 30)) for _ in range(n)])
        T = r.randint(30, 90)
        eps = F(1, r.choice([2, 4, 10]))
        small, info = arithmetic_round(inst, eps, T)
        assert all(1 <= it.height <= math.ceil(n / eps * F(30, T)) + 1 for it in small.items)
        back = info.packing_to_original(inst, nfdh(small))
        assert validate_packing(inst, back).ok
        assert back.height <= nfdh(small).height * info.unit + 1
