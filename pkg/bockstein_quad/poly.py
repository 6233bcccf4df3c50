"""Sparse polynomials over F_2 with the Bockstein derivation, polynomial matrices and
the text grammar

    poly   := '0' | term ('+' term)*
    term   := factor ('*' factor)*
    factor := 'x'UINT ('^'UINT)? | '1'

Variables are 1-based in text and 0-based internally. Monomials are exponent tuples and
are ordered graded lexicographically with x1 > x2 > ... > xm.
"""
from functools import lru_cache

import numpy as np


class PolySyntaxError(Exception):

    """Raised when polynomial text does not follow the grammar."""

    def __init__(self, message, position):
        super().__init__('{} (at position {})'.format(message, position))
        self.position = position


class VariableIndexError(Exception):
    pass


class ShapeError(Exception):
    pass


def glex_key(mono):
    """Sort key: larger key means larger monomial in graded-lex order."""
    return (sum(mono), mono)


@lru_cache(maxsize=None)
def monomials_of_degree(m, d):
    """Returns all degree-`d` monomials in `m` variables in descending graded-lex order."""
    if m == 0:
        return ((),) if d == 0 else ()
    if m == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(m - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_str(mono):
    factors = []
    for i, e in enumerate(mono):
        if e == 1:
            factors.append('x{}'.format(i + 1))
        elif e > 1:
            factors.append('x{}^{}'.format(i + 1, e))
    return '*'.join(factors) if factors else '1'


class Poly(object):

    """Polynomial in F_2[x1..xm] stored as a frozenset of monomials (coefficient 1)."""

    __slots__ = ('m', 'terms')

    def __init__(self, m, terms=()):
        self.m = m
        self.terms = frozenset(terms)

    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def one(cls, m):
        return cls(m, [(0,) * m])

    @classmethod
    def var(cls, i, m):
        """The variable x_{i+1} (0-based index `i`)."""
        if not 0 <= i < m:
            raise VariableIndexError('Variable index {} out of range [1,{}]'.format(i + 1, m))
        mono = [0] * m
        mono[i] = 1
        return cls(m, [tuple(mono)])

    @classmethod
    def monomial(cls, mono):
        return cls(len(mono), [tuple(mono)])

    @classmethod
    def linear_form(cls, coeffs):
        """Returns sum c_i x_i for a 0/1 coefficient vector."""
        m = len(coeffs)
        return cls(m, [tuple(int(i == k) for i in range(m)) for k, c in enumerate(coeffs) if c])

    def _check(self, other):
        if self.m != other.m:
            raise ShapeError(
                'Polynomials in {} and {} variables cannot be combined'.format(self.m, other.m)
            )

    def __add__(self, other):
        self._check(other)
        return Poly(self.m, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other):
        self._check(other)
        acc = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(i + j for i, j in zip(a, b))}
        return Poly(self.m, acc)

    def __pow__(self, e):
        out = Poly.one(self.m)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.m == other.m and self.terms == other.terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.m, self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return 'Poly({!r}, m={})'.format(str(self), self.m)

    def __str__(self):
        if not self.terms:
            return '0'
        return ' + '.join(monomial_str(t) for t in self.sorted_terms())

    def sorted_terms(self):
        """Monomials in descending graded-lex order."""
        return sorted(self.terms, key=glex_key, reverse=True)

    @property
    def degree(self):
        """Largest total degree, -1 for the zero polynomial."""
        return max((sum(t) for t in self.terms), default=-1)

    def is_homogeneous(self, d=None):
        degs = {sum(t) for t in self.terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def homogeneous_part(self, d):
        return Poly(self.m, [t for t in self.terms if sum(t) == d])

    def degrees(self):
        return sorted({sum(t) for t in self.terms})

    def bockstein(self):
        """The derivation with x_i -> x_i^2: x^a -> sum over odd a_i of x^(a + e_i)."""
        acc = set()
        for t in self.terms:
            for i, e in enumerate(t):
                if e & 1:
                    acc ^= {t[:i] + (e + 1,) + t[i + 1:]}
        return Poly(self.m, acc)

    def substitute(self, forms):
        """Replaces x_i by forms[i]; all forms share one variable count."""
        if len(forms) != self.m:
            raise ShapeError('Expected {} substitutions, got {}'.format(self.m, len(forms)))
        m_new = forms[0].m if forms else 0
        out = Poly.zero(m_new)
        for t in self.terms:
            term = Poly.one(m_new)
            for i, e in enumerate(t):
                if e:
                    term = term * forms[i] ** e
            out = out + term
        return out

    def evaluate(self, point):
        """Value at an F_2-point given as a 0/1 sequence of length m."""
        point = [int(p) & 1 for p in point]
        if len(point) != self.m:
            raise ShapeError('Point has {} coordinates, expected {}'.format(len(point), self.m))
        total = 0
        for t in self.terms:
            total ^= int(all(point[i] for i, e in enumerate(t) if e))
        return total

    def embed(self, m_new, offset=0):
        """Same polynomial viewed in `m_new` variables, x_i renamed x_{i+offset}."""
        if offset + self.m > m_new:
            raise ShapeError('Cannot embed {} variables at offset {} into {}'.format(
                self.m, offset, m_new))
        pad_r = m_new - offset - self.m
        return Poly(m_new, [(0,) * offset + t + (0,) * pad_r for t in self.terms])

    def restrict(self, start, stop):
        """Drops variables outside [start, stop); terms involving them must be absent."""
        if any(any(t[:start]) or any(t[stop:]) for t in self.terms):
            raise ShapeError('Polynomial involves variables outside the kept range')
        return Poly(stop - start, [t[start:stop] for t in self.terms])

    def coefficients(self, index):
        """0/1 vector over a monomial basis given as {monomial: column}."""
        vec = np.zeros(len(index), dtype=np.uint8)
        for t in self.terms:
            try:
                vec[index[t]] = 1
            except KeyError as e:
                raise ShapeError('Monomial {} not in basis'.format(monomial_str(t))) from e
        return vec

    @classmethod
    def from_coefficients(cls, vec, basis, m):
        return cls(m, [basis[i] for i in np.nonzero(vec)[0]])


def parse_poly(text, m):
    """Parses polynomial text in `m` variables.
    :param text str: polynomial in the grammar of this module.
    :param m int: number of variables.
    :return: parsed polynomial.
    :rtype: Poly.
    :raises PolySyntaxError: on malformed input, with the offending position.
    :raises VariableIndexError: when a variable index is outside [1, m].
    """
    return _Parser(text, m).parse()


class _Parser(object):

    def __init__(self, text, m):
        self.text = text
        self.m = m
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def _uint(self):
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolySyntaxError('Expected an unsigned integer', start)
        return int(self.text[start:self.pos])

    def parse(self):
        if self._peek() == '0':
            self.pos += 1
            if self._peek():
                raise PolySyntaxError('Unexpected input after 0', self.pos)
            return Poly.zero(self.m)
        out = self._term()
        while self._peek() == '+':
            self.pos += 1
            out = out + self._term()
        if self._peek():
            raise PolySyntaxError('Unexpected character {!r}'.format(self._peek()), self.pos)
        return out

    def _term(self):
        out = self._factor()
        while self._peek() == '*':
            self.pos += 1
            out = out * self._factor()
        return out

    def _factor(self):
        c = self._peek()
        if c == '1':
            self.pos += 1
            return Poly.one(self.m)
        if c != 'x':
            raise PolySyntaxError(
                'Expected a factor, got {!r}'.format(c) if c else 'Unexpected end of input',
                self.pos,
            )
        self.pos += 1
        idx_pos = self.pos
        idx = self._uint()
        if not 1 <= idx <= self.m:
            raise VariableIndexError(
                'Variable x{} at position {} out of range [1,{}]'.format(idx, idx_pos, self.m)
            )
        exp = 1
        if self._peek() == '^':
            self.pos += 1
            exp = self._uint()
        return Poly.var(idx - 1, self.m) ** exp


class PolyMatrix(object):

    """Immutable rows x cols matrix of polynomials in `m` variables."""

    def __init__(self, entries, m):
        self.entries = tuple(tuple(row) for row in entries)
        self.m = m
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ShapeError('Ragged polynomial matrix')
            for p in row:
                if p.m != m:
                    raise ShapeError('Entry in {} variables, expected {}'.format(p.m, m))

    @classmethod
    def zeros(cls, rows, cols, m):
        return cls([[Poly.zero(m)] * cols for _ in range(rows)], m)

    @classmethod
    def identity(cls, k, m):
        return cls([[Poly.one(m) if i == j else Poly.zero(m) for j in range(k)]
                    for i in range(k)], m)

    @classmethod
    def from_strings(cls, rows, m):
        return cls([[parse_poly(s, m) for s in row] for row in rows], m)

    @classmethod
    def from_coefficients(cls, coeffs):
        """Builds the degree-1 matrix sum_k coeffs[k] x_k from an (m, rows, cols) array."""
        coeffs = np.asarray(coeffs)
        m, rows, cols = coeffs.shape
        xs = [Poly.var(k, m) for k in range(m)]
        entries = []
        for i in range(rows):
            row = []
            for j in range(cols):
                p = Poly.zero(m)
                for k in range(m):
                    if coeffs[k, i, j] & 1:
                        p = p + xs[k]
                row.append(p)
            entries.append(row)
        return cls(entries, m)

    @classmethod
    def from_scalar(cls, mat, m):
        """Constant matrix with 0/1 entries."""
        mat = np.asarray(mat)
        return cls([[Poly.one(m) if v & 1 else Poly.zero(m) for v in row] for row in mat], m)

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.m == other.m
                and self.entries == other.entries)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.m, self.entries))

    def __repr__(self):
        return 'PolyMatrix({}, m={})'.format(self.to_strings(), self.m)

    def __bool__(self):
        return any(p for row in self.entries for p in row)

    def to_strings(self):
        return [[str(p) for p in row] for row in self.entries]

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError('Cannot add {} and {} matrices'.format(self.shape, other.shape))
        return PolyMatrix([[a + b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.entries, other.entries)], self.m)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError('Cannot multiply {} by {}'.format(self.shape, other.shape))
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly.zero(self.m)
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a:
                        acc = acc + a * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.m)

    def apply(self, column):
        """Returns the column sum_j M[i,j] v[j] for a sequence of polynomials v."""
        if len(column) != self.cols:
            raise ShapeError('Column of length {} does not fit {} matrix'.format(
                len(column), self.shape))
        out = []
        for row in self.entries:
            acc = Poly.zero(self.m)
            for a, v in zip(row, column):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def transpose(self):
        return PolyMatrix([list(col) for col in zip(*self.entries)] if self.rows else [],
                          self.m)

    def bockstein(self):
        return PolyMatrix([[p.bockstein() for p in row] for row in self.entries], self.m)

    def is_linear(self):
        """True if every nonzero entry is homogeneous of degree 1."""
        return all(p.is_homogeneous(1) for row in self.entries for p in row)

    def coefficient_matrices(self):
        """(m, rows, cols) array with [k, i, j] the coefficient of x_k in entry (i, j)."""
        if not self.is_linear():
            raise ShapeError('Coefficient matrices need degree-1 entries')
        out = np.zeros((self.m, self.rows, self.cols), dtype=np.uint8)
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                for t in p.terms:
                    out[t.index(1), i, j] = 1
        return out

    def evaluate(self, point):
        """Scalar 0/1 matrix obtained by evaluating every entry at `point`."""
        return np.array([[p.evaluate(point) for p in row] for row in self.entries],
                        dtype=np.uint8).reshape(self.rows, self.cols)

    def embed(self, m_new, offset=0):
        return PolyMatrix([[p.embed(m_new, offset) for p in row] for row in self.entries],
                          m_new)


def random_poly(m, degree, rng, density=0.5):
    """Random homogeneous polynomial drawn with a numpy RandomState."""
    monos = monomials_of_degree(m, degree)
    keep = rng.random_sample(len(monos)) < density
    return Poly(m, [mono for mono, k in zip(monos, keep) if k])
