import numpy as np
import pytest

from bockstein_quad import gf2
from bockstein_quad.bockstein import QModule, module_from_L, solve_L
from bockstein_quad.cohomology import (
    CochainComplex, CoefficientError, NotACocycle, ObstructionResult, RepresentationError,
    bockstein_invariants, brute_force_agrees, check_cup_well_defined, cocycle_to_extension,
    cohomology, cup, extension_morphisms, extension_to_cocycle, extensions_equivalent,
    induced_map, invariants, obstruction_test, splittings, sym_power_module,
)
from bockstein_quad.ideal import QuotientAlgebra, TruncationError
from bockstein_quad.poly import Poly, parse_poly
from bockstein_quad.quadmap import QuadMorphism, QuadraticMap, family


u3 = family('u', 3)
L = solve_L(u3).particular


def _complex(q, module=None, max_degree=5):
    algebra = QuotientAlgebra(q.extension_class(), q.m, max_degree)
    return CochainComplex(q, module or QModule.trivial(q), algebra)


def _p(text, m=3):
    return parse_poly(text, m)


@pytest.fixture
def trivial_u3():
    return _complex(u3)


@pytest.fixture
def l_u3():
    return _complex(u3, module_from_L(u3, L))


def test_trivial_cohomology_u3(trivial_u3):
    assert trivial_u3.cohomology(0).dim == 1
    h1 = trivial_u3.cohomology(1)
    assert h1.dim == 2
    assert sorted(c.to_strings()[0] for c in h1.representatives) == ['x1', 'x3']
    assert trivial_u3.cohomology(2).dim == 2


def test_differential(trivial_u3):
    c = trivial_u3.cochain(1, [_p('x2')])
    assert trivial_u3.differential(c).to_strings() == ['x1*x3']
    assert not trivial_u3.is_cocycle(c)
    assert trivial_u3.coboundary_preimage(trivial_u3.cochain(2, [_p('x1*x3')])) == c


def test_delta_squared_vanishes(trivial_u3, l_u3):
    for cx in (trivial_u3, l_u3):
        for p in range(4):
            assert not (cx.delta_matrix(p + 1).astype(int) @ cx.delta_matrix(p) % 2).any()


def test_class_vector_and_cohomologous(trivial_u3):
    c1 = trivial_u3.cochain(2, [_p('x1*x2 + x1*x3')])
    c2 = trivial_u3.cochain(2, [_p('x1*x2')])
    assert trivial_u3.cohomologous(c1, c2)
    assert (trivial_u3.class_vector(c1) == trivial_u3.class_vector(c2)).all()
    assert trivial_u3.class_vector(c2).any()
    with pytest.raises(NotACocycle):
        trivial_u3.class_vector(trivial_u3.cochain(1, [_p('x2')]))


def test_truncation_is_enforced(trivial_u3):
    with pytest.raises(TruncationError):
        trivial_u3.cohomology(5)


def test_euler_characteristics(trivial_u3, l_u3):
    assert trivial_u3.euler_characteristics() == (0, 0)
    chi_c, chi_h = l_u3.euler_characteristics()
    assert chi_c == chi_h == 0


def test_module_function_wrapper():
    assert cohomology(u3, QModule.trivial(u3), 1,
                      QuotientAlgebra(u3.extension_class(), 3, 4)).dim == 2


def test_representation_is_validated():
    bad = QModule(L, np.zeros((3, 3, 3), dtype=np.uint8))
    with pytest.raises(RepresentationError):
        CochainComplex(u3, bad)


def test_invariants_of_L_module():
    inv = invariants(module_from_L(u3, L))
    assert inv.tolist() == [[0, 1, 0]]
    assert len(invariants(QModule.trivial(u3, 2))) == 2


def test_bockstein_invariants():
    dim, basis = bockstein_invariants(u3)
    assert dim == 2
    assert sorted(str(p) for p in basis) == ['x1^2', 'x3^2']
    assert bockstein_invariants(QuadraticMap.zero(2, 0)) == (0, [])


def test_extension_of_squares():
    q = QuadraticMap.squares(1)
    cx = _complex(q)
    ext = cocycle_to_extension(cx, [parse_poly('x1^2', 1)])
    assert [str(p) for p in ext.extension_class()] == ['x1^2', 'x1^2 + x2^2']
    inc, proj = extension_morphisms(q, ext, 1)
    module, f = extension_to_cocycle(inc, proj, cx.algebra)
    assert module.is_trivial()
    assert extensions_equivalent([parse_poly('x1^2', 1)], f, q, cx.module) is not None


def test_extension_roundtrip_nontrivial_class(trivial_u3):
    f = [_p('x1*x2')]
    ext = cocycle_to_extension(trivial_u3, f)
    assert ext.m == 4
    inc, proj = extension_morphisms(u3, ext, 1)
    module, f2 = extension_to_cocycle(inc, proj, trivial_u3.algebra)
    assert module.R == trivial_u3.module.R
    assert trivial_u3.cohomologous(trivial_u3.cochain(2, f), f2)


def test_extensions_equivalent(trivial_u3):
    module = trivial_u3.module
    a, b = extensions_equivalent([_p('x1*x2')], [_p('x1*x2 + x2^2')], u3, module)
    assert a.shape == (1, 3)
    assert b.shape == (1, 3)
    assert extensions_equivalent([_p('x1*x2')], [Poly.zero(3)], u3, module) is None


def test_non_cocycle_extension():
    q = QuadraticMap.zero(2, 0)
    with pytest.raises(NotACocycle):
        cocycle_to_extension(_complex(q), [parse_poly('x1*x2', 2)])


def test_splittings(trivial_u3):
    assert len(splittings(trivial_u3)) == 3
    sections = splittings(trivial_u3, enumerate_classes=True)
    assert len(sections) == 4
    assert all(s.verify() for s in sections)


def test_cup_products(trivial_u3):
    x1, x2, x3 = (trivial_u3.cochain(1, [_p(t)]) for t in ('x1', 'x2', 'x3'))
    assert trivial_u3.is_coboundary(cup(trivial_u3, x1, x3))
    assert not cup(trivial_u3, x1, x1)
    with pytest.raises(NotACocycle):
        cup(trivial_u3, x1, x2)
    assert check_cup_well_defined(trivial_u3, 1, 1)


def test_cup_needs_trivial_coefficients(l_u3):
    c = l_u3.zero(1)
    with pytest.raises(CoefficientError):
        cup(l_u3, c, c)


def test_sym_power_modules():
    sym1 = sym_power_module(u3, L, 1)
    assert sym1.R == L.transpose()
    sym2 = sym_power_module(u3, L, 2)
    assert sym2.k == 6
    assert _complex(u3, sym2).cohomology(0).dim >= 1


def test_obstruction_nontrivial():
    q = QuadraticMap.squares(3)
    cx = _complex(q, module_from_L(q, solve_L(q).particular))
    eta = [_p('x1*x2*x3'), Poly.zero(3), Poly.zero(3)]
    result = obstruction_test(cx, eta)
    assert result.status == ObstructionResult.NONTRIVIAL
    assert result.to_dict() == {'status': 'nontrivial', 'xi': None}


def test_obstruction_coboundary(l_u3):
    result = obstruction_test(l_u3, [Poly.zero(3)] * 3)
    assert result.status == ObstructionResult.COBOUNDARY
    assert not result.xi


def test_obstruction_not_cocycle():
    q = QuadraticMap.zero(1, 0)
    result = obstruction_test(_complex(q), [parse_poly('x1^3', 1)])
    assert result.status == ObstructionResult.NOT_COCYCLE


def test_induced_map_along_inclusion(trivial_u3):
    inc = QuadMorphism.inclusion(u3, [[1], [0], [0]], [[1], [0], [0]])
    small = _complex(inc.source)
    c = trivial_u3.cochain(1, [_p('x1 + x2')])
    assert induced_map(inc, small, trivial_u3, c).to_strings() == ['x1']


def test_brute_force_agrees(trivial_u3, l_u3):
    for p in range(3):
        assert brute_force_agrees(trivial_u3, p)
        assert brute_force_agrees(l_u3, p) in (True, None)


@pytest.mark.parametrize('i', [1, 2, 3])
def test_sym_power_complexes_have_delta_squared_zero(i):
    cx = _complex(u3, sym_power_module(u3, L, i))
    for p in range(4):
        assert not (cx.delta_matrix(p + 1).astype(int) @ cx.delta_matrix(p) % 2).any()


def test_extension_roundtrip_with_L_coefficients(l_u3):
    cocycles = gf2.nullspace(l_u3.delta_matrix(2))
    assert len(cocycles)
    for row in cocycles[:4]:
        f = l_u3.from_vector(row, 2)
        ext = cocycle_to_extension(l_u3, f)
        inc, proj = extension_morphisms(u3, ext, 3)
        module, f2 = extension_to_cocycle(inc, proj, l_u3.algebra)
        assert module.R == l_u3.module.R
        assert extensions_equivalent(f, f2, u3, l_u3.module) is not None
