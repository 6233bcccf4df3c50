import io

import numpy as np
import pytest

from bockstein_quad import CapExceeded
from bockstein_quad.bockstein import solve_L
from bockstein_quad.group import (
    ConsistencyFailure, GroupHomomorphism, StructureError, build_group, center, frattini,
    lattice_M, realize_morphism, two_rank, verify_structure,
)
from bockstein_quad.poly import PolyMatrix
from bockstein_quad.properties import random_morphism
from bockstein_quad.quadmap import QuadMorphism, QuadraticMap, all_maps, family


u3 = family('u', 3)


def test_cyclic_group_of_order_four():
    group = build_group(QuadraticMap.squares(1))
    assert group.order == 4
    assert int(group.mul(2, 2)) == 1
    assert int(group.power(2, 2)) == 1
    assert int(group.power(2, 4)) == 0
    assert int(group.inverse(2)) == 3
    assert int(group.mul(2, group.inverse(2))) == 0
    assert group.is_abelian()


def test_element_encoding():
    group = build_group(u3)
    g = group.element([1, 0, 1], [0, 1, 0])
    assert g == 0b010101
    v, w = group.split(g)
    assert int(v) == 0b101
    assert int(w) == 0b010


def test_u3_structure():
    group = build_group(u3)
    assert group.order == 64
    report = verify_structure(group, u3)
    assert report.ok
    assert report.require() is report
    assert not group.is_abelian()
    assert len(center(group)) == 16


def test_u3_frattini_is_v():
    phi = frattini(build_group(u3))
    assert len(phi) == 8
    assert not (phi >> 3).any()


def test_two_rank():
    assert two_rank(build_group(u3)) == 3
    assert two_rank(build_group(QuadraticMap.squares(2))) == 2
    assert two_rank(build_group(QuadraticMap.zero(2, 1))) == 3


def test_corrupted_factor_set_breaks_associativity():
    group = build_group(QuadraticMap.squares(2), overrides={(1, 2): 1})
    report = verify_structure(group, QuadraticMap.squares(2))
    assert not report.checks['associativity']
    assert report.to_dict()['witnesses']['associativity']
    with pytest.raises(StructureError):
        report.require()


def test_sampled_associativity_path():
    report = verify_structure(build_group(u3), u3, associativity_cap=3, seed=7)
    assert report.checks['associativity']


def test_group_cap():
    with pytest.raises(CapExceeded):
        build_group(u3, cap=32)


def test_write_table():
    fh = io.StringIO()
    build_group(QuadraticMap.squares(1)).write_table(fh)
    lines = fh.getvalue().splitlines()
    assert len(lines) == 16
    assert '2 2 1' in lines


def test_realize_identity():
    group = build_group(u3)
    hom = realize_morphism(QuadMorphism.identity(u3), group, group)
    assert hom.verify()
    assert (hom(group.elements()) == group.elements()).all()


def test_realize_inclusion():
    inc = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    hom = realize_morphism(inc, build_group(inc.source), build_group(u3))
    assert hom.verify()
    assert len(set(hom.table.tolist())) == 4


def test_realize_rejects_non_morphisms():
    q = QuadraticMap.squares(1)
    group = build_group(q)
    with pytest.raises(ConsistencyFailure):
        realize_morphism(QuadMorphism(q, q, [[1]], [[0]]), group, group)


def test_realize_cap():
    group = build_group(u3)
    with pytest.raises(CapExceeded):
        realize_morphism(QuadMorphism.identity(u3), group, group, dim_cap=2)


def test_lattice_u3():
    lattice = lattice_M(solve_L(u3).particular)
    a12 = lattice.action([1, 0, 0])
    assert a12[1, 2] == 2
    assert (np.diag(a12) == 1).all()
    assert lattice.action([0, 0, 1])[1, 0] == 2


def test_lattice_rejects_non_linear_action():
    with pytest.raises(ConsistencyFailure):
        lattice_M(PolyMatrix.from_strings([['x1*x2']], 2))


def test_two_rank_detects_effectiveness():
    for m, n in ((1, 1), (2, 1), (1, 2), (2, 2)):
        for q in all_maps(m, n):
            assert (two_rank(build_group(q)) == n) == q.is_effective(), q


def test_realize_is_functorial():
    g = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    psi = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    phi = QuadMorphism(u3, u3.postcompose(g), np.eye(3, dtype=np.uint8), g)
    g1, g2, g3 = (build_group(q) for q in (psi.source, u3, phi.target))
    composite = realize_morphism(phi.compose(psi), g1, g3)
    chained = realize_morphism(phi, g2, g3)(realize_morphism(psi, g1, g2).table)
    assert GroupHomomorphism(g1, g3, chained, None).verify()
    v_comp, w_comp = g3.split(composite.table)
    v_chain, w_chain = g3.split(chained)
    assert (w_comp == w_chain).all()
    central = g1.split(g1.elements())[1] == 0
    assert (v_comp[central] == v_chain[central]).all()


def test_realize_random_morphisms_up_to_order_1024():
    rng = np.random.RandomState(11)
    for _ in range(10):
        phi = random_morphism(rng)
        assert phi.source.m + phi.source.n <= 10
        assert phi.target.m + phi.target.n <= 10
        hom = realize_morphism(phi, build_group(phi.source), build_group(phi.target))
        assert hom.verify()
        assert not hom.t_values[0]


def test_factor_lookup_matches_direct_evaluation():
    group = build_group(u3)
    w = np.arange(8)
    wa, wb = np.meshgrid(w, w, indexing='ij')
    assert (group.factor(wa, wb) == group._factor(wa, wb)).all()
