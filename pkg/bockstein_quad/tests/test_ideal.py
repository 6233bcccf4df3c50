import pytest

from bockstein_quad.ideal import (
    QuotientAlgebra, TruncationError, binomial_series, build_quotient, freeness_identity,
    inverse_series, is_regular_sequence, pullback, regularity_report, series_product,
)
from bockstein_quad.poly import Poly, parse_poly
from bockstein_quad.quadmap import QuadMorphism, QuadraticMap, family


u3 = family('u', 3)


def test_u3_quotient_dims_and_basis():
    alg = build_quotient(u3, 5)
    assert alg.dims == [1, 3, 3, 1, 0, 0]
    assert alg.finite
    assert alg.vanishes_from == 4
    assert alg.top_degree == 3
    assert alg.basis_strings()['2'] == ['x1*x2', 'x1*x3', 'x2*x3']


def test_normal_form_eliminates_smallest_monomial():
    alg = build_quotient(u3, 4)
    assert alg.normal_form(parse_poly('x2^2', 3)) == parse_poly('x1*x3', 3)
    assert alg.contains(parse_poly('x1^2 + x3^2', 3))
    assert not alg.contains(parse_poly('x1*x2', 3))
    assert alg.normal_form(parse_poly('x1^4', 3)) == Poly.zero(3)


def test_vector_coordinates():
    alg = build_quotient(u3, 4)
    vec = alg.to_vector(parse_poly('x2^2 + x1*x2', 3), 2)
    assert vec.tolist() == [1, 1, 0]
    assert alg.from_vector(vec, 2) == parse_poly('x1*x2 + x1*x3', 3)


def test_certificate_reconstructs_difference():
    alg = build_quotient(u3, 4)
    gens = u3.extension_class()
    for text in ('x2^2', 'x1*x2^2 + x3^3', 'x2^2*x3 + x1'):
        f = parse_poly(text, 3)
        h = alg.certificate(f)
        total = Poly.zero(3)
        for hk, qk in zip(h, gens):
            total = total + hk * qk
        assert total == f + alg.normal_form(f)


def test_truncation():
    alg = build_quotient(u3, 3)
    with pytest.raises(TruncationError):
        alg.normal_form(parse_poly('x1^4', 3))
    with pytest.raises(TruncationError):
        alg.dim(4)


def test_free_algebra_when_no_relations():
    alg = build_quotient(QuadraticMap.zero(2, 0), 4)
    assert alg.dims == [1, 2, 3, 4, 5]
    assert not alg.finite


def test_generators_must_be_quadrics():
    with pytest.raises(ValueError):
        QuotientAlgebra([parse_poly('x1', 2)], 2, 3)


def test_regularity():
    assert is_regular_sequence(u3)
    assert is_regular_sequence(QuadraticMap.squares(2))
    report = regularity_report(QuadraticMap.zero(2, 1))
    assert not report['regular']
    assert not report['finite']
    assert regularity_report(u3)['top_degree'] == 3


def test_pullback_along_inclusion():
    inc = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    a1 = build_quotient(inc.source, 3)
    a2 = build_quotient(u3, 3)
    assert pullback(inc, a1, a2, parse_poly('x1*x3 + x2^2', 3)) == Poly.zero(1)
    assert pullback(inc, a1, a2, parse_poly('x1 + x2', 3)) == parse_poly('x1', 1)
    with pytest.raises(ValueError):
        pullback(inc, a1, a2, parse_poly('x1', 1))


def test_series():
    assert binomial_series(3, 5) == [1, 3, 3, 1, 0]
    assert inverse_series(2, 2, 5) == [1, 0, 2, 0, 3]
    assert inverse_series(0, 2, 3) == [1, 0, 0]
    assert series_product([1, 1], [1, 1], 3) == [1, 2, 1]
    assert freeness_identity(3, 8)
