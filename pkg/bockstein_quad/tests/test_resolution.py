import numpy as np
import pytest

from bockstein_quad import CapExceeded
from bockstein_quad.group import build_group
from bockstein_quad.quadmap import QuadraticMap, family
from bockstein_quad.resolution import (
    RelabelledGroup, betti_numbers, frattini_rank_check, minimal_resolution, poincare_check,
    predicted_betti,
)


def test_cyclic_group_of_order_four():
    group = build_group(QuadraticMap.squares(1))
    assert betti_numbers(group, 4) == [1, 1, 1, 1, 1]


def test_klein_four_group():
    group = build_group(QuadraticMap.zero(2, 0))
    assert betti_numbers(group, 4) == [1, 2, 3, 4, 5]


def test_product_of_cyclic_groups():
    q = QuadraticMap.squares(2)
    report = poincare_check(q, build_group(q), 3)
    assert report == {'betti': [1, 2, 3, 4], 'predicted': [1, 2, 3, 4], 'match': True}


def test_u3():
    q = family('u', 3)
    assert predicted_betti(q, 3) == [1, 3, 6, 10]
    assert poincare_check(q, build_group(q), 3)['match']


def test_relabelling_does_not_change_betti_numbers():
    group = build_group(QuadraticMap.squares(1))
    perm = np.random.RandomState(0).permutation(group.order)
    assert betti_numbers(group, 3, relabel=perm) == [1, 1, 1, 1]
    with pytest.raises(ValueError):
        RelabelledGroup(group, [0, 0, 1, 2])


def test_resolution_images():
    res = minimal_resolution(build_group(QuadraticMap.zero(1, 0)), 2)
    assert res.betti == [1, 1, 1]
    assert len(res.images) == 2
    assert res.to_dict() == {'betti': [1, 1, 1]}


def test_caps():
    q = family('u', 3)
    with pytest.raises(CapExceeded):
        betti_numbers(build_group(q), 2, order_cap=32)
    with pytest.raises(CapExceeded):
        betti_numbers(build_group(QuadraticMap.squares(1)), 9)


def test_frattini_rank():
    q = family('u', 3)
    assert frattini_rank_check(q, [1, 3, 6])
    assert frattini_rank_check(QuadraticMap.zero(2, 1), [1, 3])
    assert not frattini_rank_check(q, [1, 4])
    assert frattini_rank_check(q, [1])


@pytest.mark.parametrize('q, degree', [
    (QuadraticMap.squares(2), 3),
    (QuadraticMap.zero(2, 0), 3),
    (family('u', 3), 2),
])
def test_boundary_squares_to_zero(q, degree):
    res = minimal_resolution(build_group(q), degree)
    rng = np.random.RandomState(0)
    for i in range(1, degree + 1):
        for y in res.images[i - 1]:
            assert not res.boundary(i - 1, y).any()
        if i < degree:
            for _ in range(5):
                y = rng.randint(0, 2, size=res.betti[i] * res.group.order)
                assert not res.boundary(i - 1, res.boundary(i, y)).any()
