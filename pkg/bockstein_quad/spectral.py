"""B_1 and B_2 pages of the Bockstein spectral sequence of G(Q).

B_1 is modelled as F_2[s_1..s_n] (x) A*(Q) with deg s_j = 2, beta(x_i) = x_i^2 and
beta(s) = L s + eta. An element is a dict {alpha: Poly} mapping s-exponents to normal
forms in A*(Q).
"""
from scipy.special import comb

from bockstein_quad import MAX_DEGREE, logger
from bockstein_quad import gf2
from bockstein_quad.bockstein import module_from_L
from bockstein_quad.cohomology import (
    Cochain, CochainComplex, ObstructionResult, obstruction_test, sym_power_module,
)
from bockstein_quad.ideal import QuotientAlgebra, TruncationError
from bockstein_quad.poly import Poly, monomials_of_degree


class SSError(Exception):
    pass


class InconsistentEta(SSError):
    pass


class ObstructionNonzero(SSError):
    pass


class BPage(object):

    """Dimensions of a page per total degree, with their provenance."""

    def __init__(self, dims, provenance, max_degree, model=None):
        self.dims = list(dims)
        self.provenance = provenance
        self.max_degree = max_degree
        self.model = model

    def __repr__(self):
        return 'BPage({}, {})'.format(self.provenance, self.dims)


class B1Model(object):

    def __init__(self, q, L, eta, algebra):
        self.q = q
        self.L = L
        self.algebra = algebra
        self.n = q.n
        self.eta = [algebra.normal_form(e) for e in eta]
        self._matrices = {}

    def basis(self, s):
        out = []
        for i in range(s // 2 + 1):
            if s - 2 * i > self.algebra.max_degree:
                continue
            for alpha in monomials_of_degree(self.n, i):
                for mono in self.algebra.basis(s - 2 * i):
                    out.append((alpha, mono))
        return out

    def dim(self, s):
        return sum(int(comb(self.n + i - 1, i, exact=True)) * self.algebra.dim(s - 2 * i)
                   for i in range(s // 2 + 1)) if self.n else self.algebra.dim(s)

    def _acc(self, out, alpha, poly):
        if poly:
            out[alpha] = out.get(alpha, Poly.zero(self.q.m)) + poly

    def beta(self, elem):
        """beta(s^alpha a) = beta(s^alpha) a + s^alpha beta(a), reduced in A*(Q)."""
        nf = self.algebra.normal_form
        out = {}
        for alpha, a in elem.items():
            self._acc(out, alpha, nf(a.bockstein()))
            for j in range(self.n):
                if not alpha[j] & 1:
                    continue
                base = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
                for l in range(self.n):
                    if self.L[j, l]:
                        target = base[:l] + (base[l] + 1,) + base[l + 1:]
                        self._acc(out, target, nf(self.L[j, l] * a))
                if self.eta[j]:
                    self._acc(out, base, nf(self.eta[j] * a))
        return {k: v for k, v in out.items() if v}

    def multiply(self, e1, e2):
        out = {}
        for a1, p1 in e1.items():
            for a2, p2 in e2.items():
                self._acc(out, tuple(x + y for x, y in zip(a1, a2)),
                          self.algebra.multiply(p1, p2))
        return {k: v for k, v in out.items() if v}

    def generator_s(self, j):
        alpha = tuple(int(i == j) for i in range(self.n))
        return {alpha: Poly.one(self.q.m)}

    def beta_matrix(self, s):
        """Matrix of beta from total degree s to s+1."""
        if s + 1 > self.algebra.max_degree:
            raise TruncationError('beta on degree {} leaves the truncation'.format(s))
        if s not in self._matrices:
            rows = {key: r for r, key in enumerate(self.basis(s + 1))}
            cols = self.basis(s)
            mat = gf2.zeros(len(rows), len(cols))
            for c, (alpha, mono) in enumerate(cols):
                for a2, poly in self.beta({alpha: Poly.monomial(mono)}).items():
                    for mono2 in poly.terms:
                        mat[rows[(a2, mono2)], c] ^= 1
            self._matrices[s] = mat
        return self._matrices[s]

    def check_beta_squared(self):
        """beta^2 = 0 on the generators x_i and s_j.
        :raises InconsistentEta: if beta^2(s_j) != 0, i.e. eta is not a cocycle.
        """
        if self.algebra.max_degree < 4:
            return True
        for j in range(self.n):
            twice = self.beta(self.beta(self.generator_s(j)))
            if twice:
                raise InconsistentEta('beta^2(s_{}) != 0, eta is not a cocycle'.format(j + 1))
        return True


def _eta_polys(q, eta):
    if eta is None:
        return [Poly.zero(q.m)] * q.n
    polys = list(eta.entries) if isinstance(eta, Cochain) else list(eta)
    if len(polys) != q.n:
        raise InconsistentEta('eta has {} entries, expected {}'.format(len(polys), q.n))
    return polys


def b1_page(q, L, eta=None, max_degree=MAX_DEGREE, algebra=None):
    """B_1 as F_2[s] (x) A*(Q) with beta(s) = L s + eta; checks beta^2 = 0 on generators."""
    logger.info('Building B1 page up to degree {}'.format(max_degree))
    algebra = algebra or QuotientAlgebra(q.extension_class(), q.m, max_degree)
    model = B1Model(q, L, _eta_polys(q, eta), algebra)
    model.check_beta_squared()
    dims = [model.dim(s) for s in range(max_degree + 1)]
    return BPage(dims, 'b1', max_degree, model)


def b2_direct(page):
    """dim B_2^s = dim ker beta_s - rank beta_{s-1} for s <= max_degree - 1."""
    model = page.model
    dims = []
    prev_rank = 0
    for s in range(page.max_degree):
        mat = model.beta_matrix(s)
        r = gf2.rank(mat)
        dims.append(model.dim(s) - r - prev_rank)
        prev_rank = r
        logger.debug('    -> B2^{} = {}'.format(s, dims[-1]))
    return BPage(dims, 'direct', page.max_degree - 1, model)


def normalize_eta(q, L, eta, algebra):
    """Changes basis s' = s + xi so that eta' = eta + delta(xi) = 0.
    :return: the degree-2 cochain xi.
    :raises InconsistentEta: if eta is not a cocycle.
    :raises ObstructionNonzero: if [eta] != 0 in H^3(Q, L).
    """
    complex_ = CochainComplex(q, module_from_L(q, L), algebra)
    result = obstruction_test(complex_, _eta_polys(q, eta))
    if result.status == ObstructionResult.NOT_COCYCLE:
        raise InconsistentEta('eta is not a cocycle')
    if result.status == ObstructionResult.NONTRIVIAL:
        raise ObstructionNonzero('[eta] != 0 in H^3(Q, L), no uniform double lifting')
    eta_c = complex_.cochain(3, _eta_polys(q, eta))
    shifted = complex_.differential(result.xi)
    if any(a + b for a, b in zip(eta_c.entries, shifted.entries)):
        raise InconsistentEta('eta + delta(xi) does not vanish')
    return result.xi


def b2_decomposition(q, L, max_degree=MAX_DEGREE, algebra=None, eta=None):
    """dim B_2^s = sum_i dim H^{s-2i}(Q, Sym^i(L)) for s <= max_degree - 1.

    A nonzero eta is first shifted away; a nontrivial class is refused.
    """
    logger.info('Decomposing B2 page up to degree {}'.format(max_degree - 1))
    algebra = algebra or QuotientAlgebra(q.extension_class(), q.m, max_degree)
    if eta is not None and any(_eta_polys(q, eta)):
        normalize_eta(q, L, eta, algebra)
    complexes = {}
    dims = []
    for s in range(max_degree):
        total = 0
        for i in range(s // 2 + 1):
            j = s - 2 * i
            if algebra.is_zero_degree(j):
                continue
            if i not in complexes:
                complexes[i] = CochainComplex(q, sym_power_module(q, L, i), algebra)
            total += complexes[i].cohomology(j).dim
        dims.append(total)
    return BPage(dims, 'decomposition', max_degree - 1)


def torsion_report(page):
    """Degrees s > 0 with B_2^s != 0: integral torsion of exponent at least 4 present."""
    return [s for s, d in enumerate(page.dims) if s > 0 and d]
