"""The graded quotient A*(Q) = F_2[x_1..x_m]/(q_1..q_n), truncated at a maximal degree.

Each degree is handled by dense row reduction of the relation span {mu * q_k}. Relation
columns are ordered by increasing graded-lex order, so every relation eliminates its
smallest monomial and normal forms live on the larger, non-pivot monomials.
"""
import numpy as np
from scipy.special import comb

from bockstein_quad import MAX_DEGREE, logger
from bockstein_quad import gf2
from bockstein_quad.poly import Poly, monomials_of_degree, monomial_str


class TruncationError(Exception):
    pass


class DegreeData(object):

    """Relations and normal-form basis of one degree of the quotient."""

    def __init__(self, m, d, generators):
        self.degree = d
        self.monomials = monomials_of_degree(m, d)
        ascending = self.monomials[::-1]
        self.ascending = ascending
        self.index = {mono: c for c, mono in enumerate(ascending)}
        self.relations = _relation_rows(m, d, generators, self.index)
        if self.relations.shape[0]:
            self.reduction = gf2.row_reduce(self.relations)
            pivots = set(self.reduction.pivots)
        else:
            self.reduction = None
            pivots = set()
        self.basis = [mono for mono in self.monomials if self.index[mono] not in pivots]
        self.basis_index = {mono: k for k, mono in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, vec):
        return self.reduction.reduce(vec) if self.reduction is not None else vec


def _relation_rows(m, d, generators, index):
    """Rows mu * q_k for all degree d-2 monomials mu, over the ascending monomial columns."""
    if d < 2 or not generators or m == 0:
        return gf2.zeros(0, len(index))
    mus = np.array(monomials_of_degree(m, d - 2), dtype=np.int64).reshape(-1, m)
    base = d + 1
    weights = base ** np.arange(m, dtype=np.int64)
    cols = np.array(list(index.values()), dtype=np.int64)
    codes = np.array(list(index.keys()), dtype=np.int64).reshape(-1, m) @ weights
    order = np.argsort(codes)
    codes, cols = codes[order], cols[order]
    rows = []
    for q in generators:
        block = gf2.zeros(len(mus), len(index))
        for t in q.terms:
            prod = (mus + np.array(t, dtype=np.int64)) @ weights
            block[np.arange(len(mus)), cols[np.searchsorted(codes, prod)]] ^= 1
        rows.append(block)
    return np.vstack(rows)


class QuotientAlgebra(object):

    """A*(Q) in degrees 0..max_degree.

    Degrees at and above the first vanishing degree are known to vanish (the ideal is
    generated in degree 2, so A^d = A^1 A^{d-1}) and are not row reduced.
    """

    def __init__(self, generators, m, max_degree=MAX_DEGREE):
        for k, q in enumerate(generators):
            if q.m != m or not q.is_homogeneous(2):
                raise ValueError('Generator {} is not a quadric in {} variables: {}'.format(
                    k + 1, m, q))
        self.generators = list(generators)
        self.m = m
        self.max_degree = max_degree
        self._data = {}
        self.vanishes_from = None
        logger.debug('Building quotient algebra up to degree {}'.format(max_degree))
        dims = []
        for d in range(max_degree + 1):
            if self.vanishes_from is not None:
                dims.append(0)
                continue
            data = self.degree_data(d)
            dims.append(data.dim)
            if data.dim == 0:
                self.vanishes_from = d
            logger.debug('    -> dim A^{} = {}'.format(d, data.dim))
        self.dims = dims

    @property
    def n(self):
        return len(self.generators)

    @property
    def finite(self):
        return self.vanishes_from is not None

    @property
    def top_degree(self):
        """Largest degree with A^d != 0 within the truncation."""
        nonzero = [d for d, k in enumerate(self.dims) if k]
        return nonzero[-1] if nonzero else -1

    def _check_degree(self, d):
        if d > self.max_degree:
            raise TruncationError(
                'Degree {} exceeds the truncation degree {}'.format(d, self.max_degree))

    def degree_data(self, d):
        self._check_degree(d)
        if d not in self._data:
            self._data[d] = DegreeData(self.m, d, self.generators)
        return self._data[d]

    def dim(self, d):
        if d < 0:
            return 0
        self._check_degree(d)
        return self.dims[d]

    def basis(self, d):
        """Normal-form monomials of degree d, descending graded-lex."""
        if self.dim(d) == 0:
            return []
        return list(self.degree_data(d).basis)

    def is_zero_degree(self, d):
        return self.vanishes_from is not None and d >= self.vanishes_from

    def normal_form(self, f):
        """Canonical representative of f modulo (q_1..q_n), reduced per degree.
        :param f Poly: polynomial in m variables.
        :return: reduced polynomial supported on normal-form monomials.
        :rtype: Poly.
        :raises TruncationError: if f has a component above max_degree.
        """
        if f.m != self.m:
            raise ValueError('Polynomial in {} variables, quotient in {}'.format(f.m, self.m))
        out = set()
        for d in f.degrees():
            self._check_degree(d)
            if self.is_zero_degree(d):
                continue
            data = self.degree_data(d)
            vec = f.homogeneous_part(d).coefficients(data.index)
            red = data.reduce(vec)
            out.update(data.ascending[c] for c in np.nonzero(red)[0])
        return Poly(self.m, out)

    def to_vector(self, f, d):
        """Coordinates of the normal form of homogeneous f in the basis of A^d."""
        vec = gf2.zeros(self.dim(d))
        if self.dim(d) == 0:
            return vec
        data = self.degree_data(d)
        for mono in self.normal_form(f).terms:
            vec[data.basis_index[mono]] = 1
        return vec

    def from_vector(self, vec, d):
        if self.dim(d) == 0:
            return Poly.zero(self.m)
        basis = self.degree_data(d).basis
        return Poly(self.m, [basis[k] for k in np.nonzero(vec)[0]])

    def contains(self, f):
        """Ideal membership within the truncation."""
        return not self.normal_form(f)

    def multiply(self, f, g):
        return self.normal_form(f * g)

    def certificate(self, f):
        """Returns h_1..h_n with f + normal_form(f) = sum_k h_k q_k exactly."""
        h = [Poly.zero(self.m) for _ in self.generators]
        nf = self.normal_form(f)
        diff = f + nf
        for d in diff.degrees():
            data = self.degree_data(d)
            vec = diff.homogeneous_part(d).coefficients(data.index)
            sol = gf2.solve_linear(data.relations.T, vec).particular
            mus = monomials_of_degree(self.m, d - 2)
            for r in np.nonzero(sol)[0]:
                k, mu = divmod(int(r), len(mus))
                h[k] = h[k] + Poly.monomial(mus[mu])
        return h

    def basis_strings(self):
        return {str(d): [monomial_str(mono) for mono in self.basis(d)]
                for d in range(self.max_degree + 1) if self.dims[d]}

    def hilbert_series(self, max_degree=None):
        """Coefficient d is dim A^d(Q)."""
        top = self.max_degree if max_degree is None else max_degree
        self._check_degree(top)
        return list(self.dims[:top + 1])


def build_quotient(q, max_degree=MAX_DEGREE):
    """Builds A*(Q) from a quadratic map."""
    logger.info('Building quotient algebra up to degree {}'.format(max_degree))
    return QuotientAlgebra(q.extension_class(), q.m, max_degree)


def pullback(phi, a1, a2, f):
    """Image of f in A*(Q2) under the algebra map A*(Q2) -> A*(Q1) induced by phi.

    Substitutes x_a -> sum_i f_W[a, i] x_i and reduces in A*(Q1).
    """
    if f.m != a2.m:
        raise ValueError('Polynomial does not live in the target quotient')
    forms = [Poly.linear_form(phi.f_w[a]) for a in range(phi.f_w.shape[0])]
    image = f.substitute(forms) if forms else Poly(a1.m, [(0,) * a1.m] if f.terms else [])
    return a1.normal_form(image)


def is_regular_sequence(q, bound=None):
    """True if m = n and A*(Q) vanishes above degree n within the bound (default mn+1)."""
    return regularity_report(q, bound)['regular']


def regularity_report(q, bound=None):
    bound = q.m * q.n + 1 if bound is None else bound
    alg = QuotientAlgebra(q.extension_class(), q.m, max(bound, q.n + 1))
    finite = alg.finite
    regular = q.m == q.n and finite and all(k == 0 for k in alg.dims[q.n + 1:])
    return {'regular': bool(regular), 'finite': bool(finite), 'dims': alg.dims,
            'top_degree': alg.top_degree}


def binomial_series(n, length):
    """Coefficients of (1+t)^n."""
    return [int(comb(n, d, exact=True)) for d in range(length)]


def inverse_series(k, step, length):
    """Coefficients of 1/(1 - t^step)^k."""
    out = [0] * length
    for j in range(0, (length - 1) // step + 1):
        out[j * step] = int(comb(k - 1 + j, j, exact=True)) if k else int(j == 0)
    return out


def series_product(a, b, length):
    out = [0] * length
    for i, x in enumerate(a[:length]):
        if x:
            for j, y in enumerate(b[:length - i]):
                out[i + j] += x * y
    return out


def freeness_identity(n, length):
    """1/(1-t)^n = (1+t)^n / (1-t^2)^n as truncated series."""
    return inverse_series(n, 1, length) == series_product(
        binomial_series(n, length), inverse_series(n, 2, length), length)
