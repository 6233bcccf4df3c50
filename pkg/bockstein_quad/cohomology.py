"""Cohomology H*(Q, U) of the complex C^p = A^p(Q) (x) U with delta(f) = beta(f) + R f.

A cochain of degree p is a column of k entries of A^p(Q), stored in normal form. As bit
vectors cochains are laid out entry-major: coordinate i * dim A^p + s is the s-th normal
monomial of entry i.
"""
import numpy as np

from bockstein_quad import CapExceeded, check_cap, logger
from bockstein_quad import gf2
from bockstein_quad.bockstein import (
    ModuleFitFailure, QModule, check_representation, fit_T, solve_L,
)
from bockstein_quad.ideal import QuotientAlgebra, TruncationError, pullback
from bockstein_quad.poly import Poly, PolyMatrix, monomials_of_degree
from bockstein_quad.quadmap import QuadMorphism, QuadraticMap

BRUTE_FORCE_CAP = 20


class RepresentationError(Exception):
    pass


class NotACocycle(Exception):
    pass


class NotAnExtension(Exception):
    pass


class CoefficientError(Exception):
    pass


class Cochain(object):

    """Element of A^p(Q) (x) U; entries are reduced to normal form on construction."""

    def __init__(self, degree, entries, algebra):
        self.degree = degree
        self.entries = tuple(algebra.normal_form(e) for e in entries)
        for e in self.entries:
            if e and not e.is_homogeneous(degree):
                raise ValueError('Cochain entry {} is not of degree {}'.format(e, degree))

    @property
    def k(self):
        return len(self.entries)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.degree == other.degree
                and self.entries == other.entries)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.degree, self.entries))

    def __bool__(self):
        return any(self.entries)

    def __repr__(self):
        return 'Cochain({}, {})'.format(self.degree, self.to_strings())

    def to_strings(self):
        return [str(e) for e in self.entries]


class CohomologyGroup(object):

    def __init__(self, p, dim, representatives):
        self.p = p
        self.dim = dim
        self.representatives = representatives

    def __repr__(self):
        return 'CohomologyGroup(p={}, dim={})'.format(self.p, self.dim)

    def to_dict(self):
        return {'p': self.p, 'dim': self.dim,
                'representatives': [c.to_strings() for c in self.representatives]}


class ObstructionResult(object):

    """Outcome of the [eta] = 0 test: 'not_cocycle', 'coboundary' or 'nontrivial'."""

    NOT_COCYCLE = 'not_cocycle'
    COBOUNDARY = 'coboundary'
    NONTRIVIAL = 'nontrivial'

    def __init__(self, status, xi=None):
        self.status = status
        self.xi = xi

    def to_dict(self):
        return {'status': self.status,
                'xi': self.xi.to_strings() if self.xi is not None else None}


class CochainComplex(object):

    """The complex C*(Q, U) for a quadratic map, a module and a truncated quotient."""

    def __init__(self, q, module, algebra=None, validate=True):
        if validate and not check_representation(module, q):
            raise RepresentationError(
                'Module {} fails beta(R) + R^2 = T(q)'.format(module.name))
        self.q = q
        self.module = module
        self.algebra = algebra if algebra is not None else QuotientAlgebra(
            q.extension_class(), q.m)
        self._delta = {}

    @property
    def k(self):
        return self.module.k

    @property
    def max_degree(self):
        return self.algebra.max_degree

    def cochain(self, degree, entries):
        if isinstance(entries, Cochain):
            return entries
        return Cochain(degree, entries, self.algebra)

    def zero(self, degree):
        return Cochain(degree, [Poly.zero(self.q.m)] * self.k, self.algebra)

    def dim(self, p):
        return self.algebra.dim(p) * self.k if p >= 0 else 0

    def to_vector(self, c):
        return np.concatenate([self.algebra.to_vector(e, c.degree) for e in c.entries]
                              ) if self.k else gf2.zeros(0)

    def from_vector(self, vec, p):
        d = self.algebra.dim(p)
        return Cochain(p, [self.algebra.from_vector(vec[i * d:(i + 1) * d], p)
                           for i in range(self.k)], self.algebra)

    def differential(self, c):
        """delta(c) = normal_form(beta(c) + R c)."""
        if c.degree + 1 > self.max_degree:
            raise TruncationError('Differential leaves the truncation at degree {}'.format(
                c.degree + 1))
        raw = [e.bockstein() for e in c.entries]
        rc = self.module.R.apply(list(c.entries))
        return Cochain(c.degree + 1, [a + b for a, b in zip(raw, rc)], self.algebra)

    def delta_matrix(self, p):
        """Bit matrix of delta: C^p -> C^{p+1}."""
        if p not in self._delta:
            if p < 0:
                self._delta[p] = gf2.zeros(self.dim(0), 0)
                return self._delta[p]
            basis = self.algebra.basis(p)
            cols = []
            for i in range(self.k):
                for mono in basis:
                    entries = [Poly.zero(self.q.m)] * self.k
                    entries[i] = Poly.monomial(mono)
                    c = Cochain(p, entries, self.algebra)
                    cols.append(self.to_vector(self.differential(c)))
            mat = gf2.zeros(self.dim(p + 1), self.dim(p))
            if cols:
                mat[:, :] = np.stack(cols, axis=1)
            self._delta[p] = mat
        return self._delta[p]

    def _image_reduction(self, p):
        img = self.delta_matrix(p - 1)
        rows = img.T
        return gf2.row_reduce(rows) if rows.size else None

    def cohomology(self, p):
        """dim H^p and canonical representatives (cocycles reduced modulo coboundaries)."""
        if p + 1 > self.max_degree:
            raise TruncationError('H^{} needs degree {} but the truncation is {}'.format(
                p, p + 1, self.max_degree))
        if self.dim(p) == 0:
            return CohomologyGroup(p, 0, [])
        cocycles = gf2.nullspace(self.delta_matrix(p)) if self.dim(p + 1) else gf2.identity(
            self.dim(p))
        img = self._image_reduction(p)
        reduced = img.reduce(cocycles) if (img is not None and len(cocycles)) else cocycles
        reps = gf2.row_reduce(reduced).basis if len(reduced) else reduced
        group = CohomologyGroup(p, len(reps), [self.from_vector(r, p) for r in reps])
        logger.debug('    -> dim H^{}({}) = {}'.format(p, self.module.name, group.dim))
        return group

    def is_cocycle(self, c):
        return not self.differential(c)

    def coboundary_preimage(self, c):
        """Some xi of degree p-1 with delta(xi) = c, or None."""
        if c.degree == 0:
            return self.zero(0) if not c else None
        mat = self.delta_matrix(c.degree - 1)
        try:
            sol = gf2.solve_linear(mat, self.to_vector(c))
        except gf2.NoSolution:
            return None
        return self.from_vector(sol.particular, c.degree - 1)

    def is_coboundary(self, c):
        return self.coboundary_preimage(c) is not None

    def class_vector(self, c, group=None):
        """Coordinates of the class of cocycle c in the given representatives of H^p."""
        if not self.is_cocycle(c):
            raise NotACocycle('Cannot take the class of a non-cocycle')
        group = group or self.cohomology(c.degree)
        if not group.dim:
            return gf2.zeros(0)
        reps = np.stack([self.to_vector(r) for r in group.representatives])
        img = self.delta_matrix(c.degree - 1).T
        system = np.vstack([reps, img]).T if img.size else reps.T
        sol = gf2.solve_linear(system, self.to_vector(c)).particular
        return sol[:group.dim]

    def cohomologous(self, c1, c2):
        return self.is_coboundary(Cochain(c1.degree, [a + b for a, b in zip(
            c1.entries, c2.entries)], self.algebra))

    def euler_characteristics(self):
        """(sum (-1)^p dim C^p, sum (-1)^p dim H^p) over a finite quotient."""
        if not self.algebra.finite or self.algebra.top_degree + 1 > self.max_degree:
            raise TruncationError('Euler characteristic needs the whole finite quotient')
        top = self.algebra.top_degree
        chi_c = sum((-1)**p * self.dim(p) for p in range(top + 1))
        chi_h = sum((-1)**p * self.cohomology(p).dim for p in range(top + 1))
        return chi_c, chi_h

    def brute_force_dim(self, p, cap=BRUTE_FORCE_CAP):
        """dim H^p by enumerating every cochain of degrees p and p-1."""
        check_cap(self.dim(p) + self.dim(p - 1), cap, 'Brute-force cochain dimension')
        pts = gf2.all_points(self.dim(p))
        images = gf2.matmul(pts, self.delta_matrix(p).T)
        cocycles = int((~images.any(axis=1)).sum()) if images.size else len(pts)
        if self.dim(p - 1):
            bd = gf2.matmul(gf2.all_points(self.dim(p - 1)), self.delta_matrix(p - 1).T)
            coboundaries = len(np.unique(bd, axis=0))
        else:
            coboundaries = 1
        return int(np.log2(cocycles)) - int(np.log2(coboundaries))


def differential(c, module, algebra, q):
    """delta(c) for the module over Q; the module must pass the representation check."""
    return CochainComplex(q, module, algebra).differential(c)


def cohomology(q, module, p, algebra=None):
    return CochainComplex(q, module, algebra).cohomology(p)


def invariants(module):
    """Basis (rows) of U^Q = {u : rho_W(w) u = 0 for all w}."""
    coeffs = module.R.coefficient_matrices()
    stacked = coeffs.reshape(-1, module.k)
    return gf2.nullspace(stacked)


def bockstein_invariants(q):
    """The subspace of span{q_k} killed by beta, as (dim, basis polynomials)."""
    polys = q.extension_class()
    m, n = q.m, q.n
    if n == 0 or m == 0:
        return 0, []
    idx2 = {mono: c for c, mono in enumerate(monomials_of_degree(m, 2))}
    idx3 = {mono: c for c, mono in enumerate(monomials_of_degree(m, 3))}
    ev = np.stack([p.coefficients(idx2) for p in polys], axis=1)
    beta = np.stack([p.bockstein().coefficients(idx3) for p in polys], axis=1)
    kernel = gf2.nullspace(beta)
    if not len(kernel):
        return 0, []
    spans = gf2.matmul(kernel, ev.T)
    red = gf2.row_reduce(spans)
    basis = [Poly.from_coefficients(row, list(idx2), m) for row in red.basis]
    return red.rank, basis


def _extension_polys(q, module, f_polys):
    m, k = q.m, module.k
    total = m + k
    q_big = [p.embed(total) for p in q.extension_class()]
    z = [Poly.var(m + a, total) for a in range(k)]
    R = module.R.embed(total)
    rz = R.apply(z)
    u_part = [z[a] * z[a] + rz[a] + f_polys[a].embed(total) for a in range(k)]
    return q_big + u_part


def _as_polys(f, q, k):
    polys = list(f.entries) if isinstance(f, Cochain) else list(f)
    if len(polys) != k:
        raise ValueError('Cochain has {} entries, module has dimension {}'.format(len(polys), k))
    for p in polys:
        if p.m != q.m or not p.is_homogeneous(2):
            raise ValueError('Factor set entries must be quadrics, got {}'.format(p))
    return polys


def cocycle_to_extension(complex_, f):
    """Q~(u, w) = (u + rho_W(w) u + f(w), Q(w)) on (W, U) -> (V, U).

    `f` is a degree-2 cochain or a column of quadrics representing one; its polynomials are
    used verbatim as the factor set.
    :raises NotACocycle: if delta(f) != 0.
    """
    q, module = complex_.q, complex_.module
    polys = _as_polys(f, q, module.k)
    if not complex_.is_cocycle(complex_.cochain(2, polys)):
        raise NotACocycle('Factor set is not a cocycle, the extension is not Bockstein closed')
    ext = QuadraticMap.from_polys(_extension_polys(q, module, polys), q.m + module.k)
    solve_L(ext)
    return ext


def extension_morphisms(q, ext, k):
    """Inclusion of U (u -> u) and projection to Q for the fixed (W, U), (V, U) layout."""
    u_map = QuadraticMap.squares(k)
    inc = QuadMorphism(u_map, ext,
                       np.vstack([gf2.zeros(q.m, k), gf2.identity(k)]),
                       np.vstack([gf2.zeros(q.n, k), gf2.identity(k)]))
    proj = QuadMorphism(ext, q,
                        np.hstack([gf2.identity(q.m), gf2.zeros(q.m, k)]),
                        np.hstack([gf2.identity(q.n), gf2.zeros(q.n, k)]))
    return inc, proj


def extension_to_cocycle(inc, proj, algebra=None):
    """Recovers the module and factor set of an extension 0 -> U -> Q~ -> Q -> 0.
    :param inc QuadMorphism: inclusion of u -> u into Q~.
    :param proj QuadMorphism: projection Q~ -> Q.
    :return: tuple of the QModule and the degree-2 Cochain.
    :rtype: tuple.
    :raises NotAnExtension: if the pair is not a short exact sequence of this shape.
    """
    ext, q, u_map = proj.source, proj.target, inc.source
    k = u_map.m
    if inc.target != ext:
        raise NotAnExtension('Inclusion and projection do not share the middle map')
    if u_map != QuadraticMap.squares(k) or u_map.n != k:
        raise NotAnExtension('Kernel must be the map u -> u on U')
    if not inc.is_injective() or not inc.verify() or not proj.verify():
        raise NotAnExtension('Inclusion must be an injective Quad morphism')
    if gf2.rank(proj.f_w) != q.m or gf2.rank(proj.f_v) != q.n:
        raise NotAnExtension('Projection must be surjective')
    if (gf2.matmul(proj.f_w, inc.f_w).any() or gf2.matmul(proj.f_v, inc.f_v).any()
            or ext.m != q.m + k or ext.n != q.n + k):
        raise NotAnExtension('Image of the inclusion must be the kernel of the projection')
    m, n = q.m, q.n
    lift_w = gf2.solve_linear(proj.f_w, gf2.identity(m)).particular if m else gf2.zeros(
        ext.m, 0)
    lift_v = gf2.solve_linear(proj.f_v, gf2.identity(n)).particular if n else gf2.zeros(
        ext.n, 0)

    def u_coords(vals):
        return gf2.solve_linear(inc.f_v, np.asarray(vals).T).particular.T

    coeffs = np.zeros((m, k, k), dtype=np.uint8)
    for b in range(k):
        ub = inc.f_w[:, b]
        for j in range(m):
            coeffs[j][:, b] = u_coords(ext.polar(ub, lift_w[:, j])[np.newaxis, :])[0]
    R = PolyMatrix.from_coefficients(coeffs) if m else PolyMatrix.zeros(k, k, 0)

    def f_eval(pts):
        lifted = gf2.matmul(pts, lift_w.T)
        vals = ext.eval_many(lifted) ^ gf2.matmul(q.eval_many(pts), lift_v.T)
        return u_coords(vals)

    eye = gf2.identity(m)
    singles = f_eval(eye) if m else gf2.zeros(0, k)
    polys = []
    for a in range(k):
        terms = []
        for j in range(m):
            if singles[j, a]:
                mono = [0] * m
                mono[j] = 2
                terms.append(tuple(mono))
        polys.append(terms)
    for i in range(m):
        for j in range(i + 1, m):
            pair = f_eval((eye[i] ^ eye[j])[np.newaxis, :])[0] ^ singles[i] ^ singles[j]
            for a in np.nonzero(pair)[0]:
                mono = [0] * m
                mono[i] = mono[j] = 1
                polys[a].append(tuple(mono))
    f_polys = [Poly(m, t) for t in polys]
    S = R.bockstein() + R @ R
    try:
        T = fit_T(S, q.extension_class(), m)
    except ModuleFitFailure as e:
        raise NotAnExtension('Recovered action is not a representation') from e
    module = QModule(R, T, name='recovered')
    algebra = algebra or QuotientAlgebra(q.extension_class(), m)
    return module, Cochain(2, f_polys, algebra)


def _coboundary_system(q, module):
    """Columns: quadratic coefficients of beta(a)+Ra (unknown a) and b q (unknown b)."""
    m, n, k = q.m, q.n, module.k
    index = {mono: c for c, mono in enumerate(monomials_of_degree(m, 2))}
    size = len(index)
    polys = q.extension_class()
    cols = []
    for c in range(k):
        for j in range(m):
            a = [Poly.zero(m)] * k
            a[c] = Poly.var(j, m)
            ra = module.R.apply(a)
            col = [ra[b] + (a[b].bockstein()) for b in range(k)]
            cols.append(np.concatenate([p.coefficients(index) for p in col]))
    for c in range(k):
        for l in range(n):
            col = [polys[l] if b == c else Poly.zero(m) for b in range(k)]
            cols.append(np.concatenate([p.coefficients(index) for p in col]))
    if not cols:
        return gf2.zeros(k * size, 0), index
    return np.stack(cols, axis=1), index


def extensions_equivalent(f1, f2, q, module):
    """Solves f2(w) + f1(w) = (1 + rho(w)) a(w) + b(Q(w)) for linear a: W->U, b: V->U.
    :return: tuple (a, b) of (k x m) and (k x n) bit matrices, or None if inequivalent.
    """
    k = module.k
    p1, p2 = _as_polys(f1, q, k), _as_polys(f2, q, k)
    mat, index = _coboundary_system(q, module)
    rhs = np.concatenate([(x + y).coefficients(index) for x, y in zip(p1, p2)]
                         ) if k else gf2.zeros(0)
    try:
        sol = gf2.solve_linear(mat, rhs).particular
    except gf2.NoSolution:
        return None
    km = k * q.m
    return sol[:km].reshape(k, q.m), sol[km:].reshape(k, q.n)


def splittings(complex_, enumerate_classes=False):
    """Sections of the split extension Q~ = cocycle_to_extension(f = 0).

    Returns the trivial section and one per H^1 representative, or one per H^1 class when
    `enumerate_classes` is set. A section is s_W = [I; d_W], s_V = [I; d_V] where
    beta(d) + R d = d_V q.
    """
    q, module = complex_.q, complex_.module
    k, m, n = module.k, q.m, q.n
    ext = cocycle_to_extension(complex_, [Poly.zero(m)] * k)
    _, proj = extension_morphisms(q, ext, k)
    h1 = complex_.cohomology(1)
    reps = [complex_.to_vector(r) for r in h1.representatives]
    d = complex_.algebra.dim(1)
    if enumerate_classes:
        combos = gf2.span_elements(np.stack(reps)) if reps else gf2.zeros(1, k * d)
    else:
        combos = np.vstack([gf2.zeros(1, k * d)] + [r[np.newaxis, :] for r in reps])
    mat, index = _coboundary_system(q, module)
    linear = {mono: j for j, mono in enumerate(monomials_of_degree(m, 1))}
    sections = []
    for vec in combos:
        cochain = complex_.from_vector(vec, 1)
        d_w = np.array([e.coefficients(linear) for e in cochain.entries],
                       dtype=np.uint8).reshape(k, m)
        rd = module.R.apply(list(cochain.entries))
        target = np.concatenate([(a + e.bockstein()).coefficients(index)
                                 for a, e in zip(rd, cochain.entries)])
        sol = gf2.solve_linear(mat[:, k * m:], target).particular
        d_v = sol.reshape(k, n)
        s = QuadMorphism(q, ext, np.vstack([gf2.identity(m), d_w]),
                         np.vstack([gf2.identity(n), d_v]))
        if not s.verify() or not (proj.compose(s).f_w == gf2.identity(m)).all():
            raise RepresentationError('Derivation does not give a section')
        sections.append(s)
    logger.debug('    -> {} splittings'.format(len(sections)))
    return sections


def _require_trivial(complex_):
    if not complex_.module.is_trivial() or complex_.k != 1:
        raise CoefficientError('Cup products need trivial one-dimensional coefficients')


def cup(complex_, f, g):
    """[f][g] = [fg] for trivial coefficients; returns the product cocycle."""
    _require_trivial(complex_)
    for c in (f, g):
        if not complex_.is_cocycle(c):
            raise NotACocycle('Cup product needs cocycles')
    prod = complex_.algebra.multiply(f.entries[0], g.entries[0])
    return Cochain(f.degree + g.degree, [prod], complex_.algebra)


def check_cup_well_defined(complex_, p, r):
    """Products of cocycles are cocycles; coboundary times cocycle is a coboundary."""
    _require_trivial(complex_)
    zp = [complex_.from_vector(v, p) for v in gf2.nullspace(complex_.delta_matrix(p))]
    zr = [complex_.from_vector(v, r) for v in gf2.nullspace(complex_.delta_matrix(r))]
    bp = [complex_.from_vector(v, p) for v in complex_.delta_matrix(p - 1).T
          if v.any()] if p > 0 else []
    for a in zp:
        for b in zr:
            if not complex_.is_cocycle(cup(complex_, a, b)):
                return False
    for a in bp:
        for b in zr:
            if not complex_.is_coboundary(cup(complex_, a, b)):
                return False
    return True


def sym_power_module(q, L, i):
    """Sym^i(L): U = degree-i monomials in s_1..s_n, graded-lex descending.

    The complex of this module is (S^i (x) A*(Q), beta) with beta(s) = L s, acting on the
    coefficient columns of s^alpha:
    R[beta', alpha] = sum of (alpha_j mod 2) L[j, l] over alpha - e_j + e_l = beta'.
    For i = 1 this gives R = L^T.
    """
    n, m = L.rows, L.m
    monos = monomials_of_degree(n, i)
    index = {mono: c for c, mono in enumerate(monos)}
    k = len(monos)
    entries = [[Poly.zero(m) for _ in range(k)] for _ in range(k)]
    for col, alpha in enumerate(monos):
        for j in range(n):
            if not alpha[j] & 1:
                continue
            for l in range(n):
                if not L[j, l]:
                    continue
                target = list(alpha)
                target[j] -= 1
                target[l] += 1
                row = index[tuple(target)]
                entries[row][col] = entries[row][col] + L[j, l]
    R = PolyMatrix(entries, m)
    T = fit_T(R.bockstein() + R @ R, q.extension_class(), m)
    return QModule(R, T, name='sym:{}'.format(i))


def obstruction_test(complex_, eta):
    """Classifies a degree-3 cochain: not a cocycle, a coboundary delta(xi), or nontrivial."""
    eta = complex_.cochain(3, eta)
    if not complex_.is_cocycle(eta):
        return ObstructionResult(ObstructionResult.NOT_COCYCLE)
    xi = complex_.coboundary_preimage(eta)
    if xi is None:
        return ObstructionResult(ObstructionResult.NONTRIVIAL)
    return ObstructionResult(ObstructionResult.COBOUNDARY, xi)


def induced_map(phi, complex1, complex2, c):
    """Pulls a trivial-coefficient cochain of Q2 back to Q1 along phi."""
    _require_trivial(complex1)
    _require_trivial(complex2)
    image = pullback(phi, complex1.algebra, complex2.algebra, c.entries[0])
    return Cochain(c.degree, [image], complex1.algebra)


def brute_force_agrees(complex_, p, cap=BRUTE_FORCE_CAP):
    """Compares the enumerated dim H^p with the rank computation; None above the cap."""
    try:
        brute = complex_.brute_force_dim(p, cap)
    except CapExceeded:
        return None
    return brute == complex_.cohomology(p).dim
