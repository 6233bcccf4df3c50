import numpy as np
import pytest

from bockstein_quad.poly import (
    Poly, PolyMatrix, PolySyntaxError, ShapeError, VariableIndexError, monomials_of_degree,
    parse_poly,
)


x1, x2, x3 = (Poly.var(i, 3) for i in range(3))


def test_monomial_order_is_descending_graded_lex():
    assert monomials_of_degree(3, 2) == (
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert monomials_of_degree(0, 0) == ((),)


def test_print_canonical_form():
    assert str(x2 * x2 + x1 * x3) == 'x1*x3 + x2^2'
    assert str(Poly.zero(3)) == '0'
    assert str(Poly.one(3)) == '1'
    assert str(x1 ** 3 * x2) == 'x1^3*x2'


def test_parse():
    assert parse_poly('x1*x3 + x2^2', 3) == x1 * x3 + x2 * x2
    assert parse_poly(' x1 + x1 ', 3) == Poly.zero(3)
    assert parse_poly('0', 3) == Poly.zero(3)
    assert parse_poly('1 + x2', 3) == Poly.one(3) + x2


def test_parse_errors_report_position():
    with pytest.raises(PolySyntaxError) as err:
        parse_poly('x1 + + x2', 3)
    assert err.value.position == 5
    with pytest.raises(VariableIndexError):
        parse_poly('x4', 3)
    with pytest.raises(PolySyntaxError):
        parse_poly('x1^', 3)


def test_bockstein_derivation():
    assert (x1 * x2).bockstein() == x1 * x1 * x2 + x1 * x2 * x2
    assert (x1 * x1).bockstein() == Poly.zero(3)
    f = x1 * x2 + x3
    assert not f.bockstein().bockstein()


def test_degrees_and_homogeneity():
    f = x1 * x2 + x3
    assert f.degree == 2
    assert Poly.zero(3).degree == -1
    assert f.degrees() == [1, 2]
    assert not f.is_homogeneous()
    assert f.homogeneous_part(2) == x1 * x2
    assert Poly.zero(3).is_homogeneous(2)


def test_substitute_and_evaluate():
    f = x1 * x2
    g = f.substitute([x1 + x2, x3, x1])
    assert g == x1 * x3 + x2 * x3
    assert f.evaluate([1, 1, 0]) == 1
    assert f.evaluate([1, 0, 1]) == 0
    with pytest.raises(ShapeError):
        f.evaluate([1, 1])


def test_embed_and_restrict():
    f = Poly.var(0, 1) ** 2
    big = f.embed(3, offset=2)
    assert big == x3 * x3
    assert big.restrict(2, 3) == f


def test_poly_matrix_arithmetic():
    L = PolyMatrix.from_strings([['0', '0', '0'], ['x3', '0', 'x1'], ['0', '0', '0']], 3)
    assert L.to_strings()[1] == ['x3', '0', 'x1']
    assert L.is_linear()
    assert not (L @ L)
    assert L.transpose()[2, 1] == x1
    assert L.bockstein()[1, 0] == x3 * x3
    assert L.apply([x1 * x1, x2 * x2 + x1 * x3, x3 * x3]) == [
        Poly.zero(3), x1 * x1 * x3 + x1 * x3 * x3, Poly.zero(3)]
    assert (L.evaluate([1, 0, 0]) == np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]])).all()


def test_poly_matrix_coefficients():
    L = PolyMatrix.from_strings([['x1 + x2', '0'], ['0', 'x2']], 2)
    coeffs = L.coefficient_matrices()
    assert coeffs.shape == (2, 2, 2)
    assert PolyMatrix.from_coefficients(coeffs) == L


def test_poly_matrix_shape_checks():
    with pytest.raises(ShapeError):
        PolyMatrix([[x1], [x1, x2]], 3)
    with pytest.raises(ShapeError):
        PolyMatrix.identity(2, 3) @ PolyMatrix.identity(3, 3)
