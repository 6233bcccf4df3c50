import numpy as np
import pytest

from bockstein_quad import CapExceeded
from bockstein_quad.quadmap import (
    NotNormalEmbedding, QuadMapError, QuadMorphism, QuadraticMap, all_maps, family,
    random_map,
)


u3 = family('u', 3)


def test_u3_extension_class():
    assert [str(p) for p in u3.extension_class()] == ['x1^2', 'x1*x3 + x2^2', 'x3^2']


def test_family_dimensions():
    assert family('gl', 2).m == family('gl', 2).n == 4
    assert family('sl', 2).m == 3
    assert family('u', 4).m == 6
    with pytest.raises(QuadMapError):
        family('so', 3)
    with pytest.raises(QuadMapError):
        family('u', 0)


def test_eval_and_polar():
    assert u3.eval([1, 0, 1]).tolist() == [1, 1, 1]
    assert u3.polar([1, 0, 0], [0, 0, 1]).tolist() == [0, 1, 0]
    assert QuadraticMap.squares(2).eval([1, 1]).tolist() == [1, 1]


def test_polar_identity_holds_for_random_maps():
    rng = np.random.RandomState(3)
    for _ in range(10):
        assert random_map(rng.randint(1, 5), rng.randint(1, 4), rng).check_polar_identity()


def test_polar_identity_cap():
    with pytest.raises(CapExceeded):
        QuadraticMap.zero(4, 1).check_polar_identity(cap=3)


def test_invalid_bilinear_table():
    table = np.zeros((2, 2, 1), dtype=np.uint8)
    table[0, 0] = 1
    with pytest.raises(QuadMapError):
        QuadraticMap(np.zeros((2, 1)), table)
    table = np.zeros((2, 2, 1), dtype=np.uint8)
    table[0, 1] = 1
    with pytest.raises(QuadMapError):
        QuadraticMap(np.zeros((2, 1)), table)


def test_from_polys_rejects_non_quadrics():
    with pytest.raises(QuadMapError):
        QuadraticMap.from_strings(['x1 + x2^2'], 2)


def test_dict_exchange():
    data = u3.to_dict()
    assert data['B'] == [{'i': 1, 'j': 3, 'v': [0, 1, 0]}]
    assert QuadraticMap.from_dict(data) == u3
    assert QuadraticMap.from_dict({'m': 3, 'n': 3, 'q_polys': data['q_polys']}) == u3
    data['q_polys'] = ['x1^2', 'x2^2', 'x3^2']
    with pytest.raises(QuadMapError):
        QuadraticMap.from_dict(data)
    with pytest.raises(QuadMapError):
        QuadraticMap.from_dict({'m': 2})


def test_effectiveness_and_frattini():
    assert u3.is_effective()
    assert u3.is_frattini()
    assert u3.is_two_power_exact()
    assert not QuadraticMap.zero(2, 1).is_effective()
    assert not QuadraticMap.zero(2, 1).is_frattini()
    with pytest.raises(CapExceeded):
        u3.is_effective(cap=2)


def test_direct_sum():
    q = QuadraticMap.direct_sum(QuadraticMap.squares(1), QuadraticMap.squares(1))
    assert q == QuadraticMap.squares(2)


def test_all_maps_counts():
    assert len(list(all_maps(1, 1))) == 2
    assert len(list(all_maps(2, 1))) == 8


def test_restriction_and_inclusion():
    inc = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    assert inc.source == QuadraticMap.squares(1)
    assert inc.verify()
    assert inc.pullback_check()
    assert inc.is_injective()
    with pytest.raises(QuadMapError):
        u3.restrict([[1], [0], [1]], [[1], [0], [0]])


def test_compose_and_image():
    ident = QuadMorphism.identity(u3)
    inc = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    comp = ident.compose(inc)
    assert (comp.f_w == inc.f_w).all()
    assert comp.verify()
    assert ident.image() == u3
    with pytest.raises(QuadMapError):
        inc.compose(ident)


def test_wrong_morphism_fails_both_checks():
    q = QuadraticMap.squares(1)
    phi = QuadMorphism(q, q, [[1]], [[0]])
    assert not phi.verify()
    assert not phi.pullback_check()


def test_cokernel_of_normal_embedding():
    inc = QuadMorphism.inclusion(u3, [[0], [1], [0]], [[0], [1], [0]])
    assert inc.is_normal_embedding()
    assert inc.cokernel() == QuadraticMap.squares(2)


def test_cokernel_requires_normal_embedding():
    inc = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    assert not inc.is_normal_embedding()
    with pytest.raises(NotNormalEmbedding):
        inc.cokernel()


def test_non_bit_entries_are_rejected():
    with pytest.raises(QuadMapError):
        QuadraticMap.from_dict({'m': 1, 'n': 1, 'Q': [[2]]})
    with pytest.raises(QuadMapError):
        QuadraticMap.from_dict({'m': 2, 'n': 1, 'Q': [[0], [0]],
                                'B': [{'i': 1, 'j': 2, 'v': [3]}]})
    with pytest.raises(QuadMapError):
        QuadraticMap.from_dict({'m': 2, 'n': 1, 'Q': [[0], [0]],
                                'B': [{'i': 1, 'j': 2, 'v': [1, 0]}]})


@pytest.mark.parametrize('size', [2, 3, 4])
def test_upper_triangular_family_is_two_power_exact(size):
    q = family('u', size)
    assert q.m == q.n == size * (size - 1) // 2
    assert q.is_two_power_exact()


def test_precompose_and_postcompose():
    assert u3.precompose(np.eye(3, dtype=np.uint8)) == u3
    q = u3.precompose([[1, 0, 1], [0, 1, 0], [0, 0, 0]])
    assert q.q_values.tolist() == [[1, 0, 0], [0, 1, 0], [1, 0, 0]]
    assert not q.b_table.any()
    pushed = QuadraticMap.squares(1).postcompose([[1], [1]])
    assert pushed.q_values.tolist() == [[1, 1]]
    with pytest.raises(QuadMapError):
        u3.postcompose([[1, 0]])


def test_kernel_and_image_dimensions_add_up():
    f_w = [[1, 0, 1], [0, 1, 0], [0, 0, 0]]
    phi = QuadMorphism(u3.precompose(f_w), u3, f_w, np.eye(3, dtype=np.uint8))
    assert phi.verify()
    assert phi.pullback_check()
    assert phi.kernel().m == 1
    assert phi.image().m == 2
    rng = np.random.RandomState(3)
    for _ in range(20):
        q = random_map(3, 2, rng)
        f_w = rng.randint(0, 2, size=(3, 4))
        phi = QuadMorphism(q.precompose(f_w), q, f_w, np.eye(2, dtype=np.uint8))
        assert phi.kernel().m + phi.image().m == phi.source.m
