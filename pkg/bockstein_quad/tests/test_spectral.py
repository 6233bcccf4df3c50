import pytest

from bockstein_quad.bockstein import solve_L
from bockstein_quad.ideal import QuotientAlgebra
from bockstein_quad.poly import Poly, parse_poly
from bockstein_quad.quadmap import QuadraticMap, family
from bockstein_quad.spectral import (
    BPage, InconsistentEta, ObstructionNonzero, b1_page, b2_decomposition, b2_direct,
    normalize_eta, torsion_report,
)


u3 = family('u', 3)
L = solve_L(u3).particular


def test_b1_dims_u3():
    page = b1_page(u3, L, max_degree=4)
    assert page.dims == [1, 3, 6, 10, 15]
    assert page.provenance == 'b1'


def test_beta_on_polynomial_generator():
    model = b1_page(u3, L, max_degree=4).model
    assert model.beta(model.generator_s(1)) == {
        (1, 0, 0): parse_poly('x3', 3), (0, 0, 1): parse_poly('x1', 3)}
    assert not model.beta(model.generator_s(0))


def test_cyclic_group_of_order_four():
    q = QuadraticMap.squares(1)
    page = b1_page(q, solve_L(q).particular, max_degree=6)
    assert page.dims == [1] * 7
    direct = b2_direct(page)
    assert direct.dims == [1] * 6
    assert torsion_report(direct) == [1, 2, 3, 4, 5]


@pytest.mark.parametrize('q', [QuadraticMap.squares(2), u3])
def test_direct_agrees_with_decomposition(q):
    L_q = solve_L(q).particular
    algebra = QuotientAlgebra(q.extension_class(), q.m, 5)
    direct = b2_direct(b1_page(q, L_q, None, 5, algebra))
    decomp = b2_decomposition(q, L_q, 5, algebra)
    assert direct.dims == decomp.dims
    assert len(direct.dims) == 5


def test_eta_not_a_cocycle():
    q = QuadraticMap.zero(1, 1)
    with pytest.raises(InconsistentEta):
        b1_page(q, solve_L(q).particular, [parse_poly('x1^3', 1)], max_degree=5)


def test_eta_wrong_length():
    with pytest.raises(InconsistentEta):
        b1_page(u3, L, [Poly.zero(3)], max_degree=4)


def test_nontrivial_obstruction_is_refused():
    q = QuadraticMap.squares(3)
    eta = [parse_poly('x1*x2*x3', 3), Poly.zero(3), Poly.zero(3)]
    with pytest.raises(ObstructionNonzero):
        b2_decomposition(q, solve_L(q).particular, 5, eta=eta)


def test_normalize_zero_eta():
    algebra = QuotientAlgebra(u3.extension_class(), 3, 5)
    xi = normalize_eta(u3, L, [Poly.zero(3)] * 3, algebra)
    assert xi.degree == 2
    assert not xi


def test_torsion_report():
    assert torsion_report(BPage([1, 0, 2, 0], 'direct', 3)) == [2]
    assert torsion_report(BPage([1], 'direct', 0)) == []


@pytest.mark.parametrize('q', [QuadraticMap.squares(1), QuadraticMap.squares(2),
                               QuadraticMap.squares(3), u3])
def test_direct_agrees_with_decomposition_to_degree_ten(q):
    L_q = solve_L(q).particular
    algebra = QuotientAlgebra(q.extension_class(), q.m, 10)
    direct = b2_direct(b1_page(q, L_q, None, 10, algebra))
    assert direct.dims == b2_decomposition(q, L_q, 10, algebra).dims
    assert len(direct.dims) == 10
