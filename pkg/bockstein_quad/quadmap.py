"""Quadratic maps Q: W -> V over F_2, their extension classes and morphisms.

Vectors of W and V are coordinate bit vectors in the fixed bases w_1..w_m and v_1..v_n.
Matrices act on column vectors, so a morphism f_W is an (m2 x m1) bit matrix.
"""
import numpy as np

from bockstein_quad import EFFECTIVE_CAP, check_cap, logger
from bockstein_quad import gf2
from bockstein_quad.poly import Poly, monomials_of_degree, parse_poly

FAMILIES = ('gl', 'sl', 'u')


class QuadMapError(Exception):
    pass


class NotNormalEmbedding(QuadMapError):
    pass


class NotInjective(QuadMapError):
    pass


def _bit_array(values, what):
    try:
        arr = np.asarray(values, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise QuadMapError('{} must hold integer bits'.format(what)) from e
    if ((arr != 0) & (arr != 1)).any():
        raise QuadMapError('{} has entries outside {{0, 1}}'.format(what))
    return arr


def _as_columns(mat, rows):
    mat = gf2.to_gf2(mat)
    if mat.ndim == 1:
        mat = mat[:, np.newaxis]
    if mat.shape[0] != rows:
        raise QuadMapError('Expected {} rows, got shape {}'.format(rows, mat.shape))
    return mat


class QuadraticMap(object):

    """Quadratic map given by its values on a basis and its polar bilinear table.

    `q_values[i]` is Q(w_i) in F_2^n and `b_table[i, j]` is B(w_i, w_j); the table is
    symmetric with zero diagonal.
    """

    def __init__(self, q_values, b_table):
        q_values = gf2.to_gf2(q_values)
        b_table = gf2.to_gf2(b_table)
        if q_values.ndim != 2:
            raise QuadMapError('Q values must be an (m x n) array')
        m, n = q_values.shape
        if b_table.shape != (m, m, n):
            raise QuadMapError(
                'Bilinear table has shape {}, expected {}'.format(b_table.shape, (m, m, n))
            )
        if b_table[np.arange(m), np.arange(m)].any():
            raise QuadMapError('Polar form must vanish on the diagonal, B(w,w)=0')
        if (b_table != b_table.transpose(1, 0, 2)).any():
            raise QuadMapError('Polar form must be symmetric')
        q_values.setflags(write=False)
        b_table.setflags(write=False)
        self.q_values = q_values
        self.b_table = b_table

    @property
    def m(self):
        return self.q_values.shape[0]

    @property
    def n(self):
        return self.q_values.shape[1]

    def __eq__(self, other):
        return (isinstance(other, QuadraticMap) and self.q_values.shape == other.q_values.shape
                and (self.q_values == other.q_values).all()
                and (self.b_table == other.b_table).all())

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'QuadraticMap(m={}, n={}, q={})'.format(
            self.m, self.n, [str(p) for p in self.extension_class()])

    @classmethod
    def zero(cls, m, n):
        return cls(gf2.zeros(m, n), np.zeros((m, m, n), dtype=np.uint8))

    @classmethod
    def from_upper(cls, q_values, pairs, m, n):
        """Builds a map from Q values and {(i, j): B(w_i, w_j)} for i < j (0-based)."""
        table = np.zeros((m, m, n), dtype=np.uint8)
        for (i, j), v in pairs.items():
            if not i < j:
                raise QuadMapError('Bilinear entries need i < j, got ({}, {})'.format(i, j))
            table[i, j] = table[j, i] = gf2.to_gf2(v)
        return cls(np.asarray(q_values, dtype=np.uint8).reshape(m, n), table)

    @classmethod
    def from_polys(cls, polys, m):
        """Recovers (Q, B) from an extension class column of degree-2 quadrics.
        :param polys list: n polynomials in `m` variables.
        :param m int: dimension of W.
        :return: the quadratic map whose extension class is `polys`.
        :rtype: QuadraticMap.
        :raises QuadMapError: if an entry is not homogeneous of degree 2.
        """
        n = len(polys)
        q_values = gf2.zeros(m, n)
        table = np.zeros((m, m, n), dtype=np.uint8)
        for k, p in enumerate(polys):
            if p.m != m:
                raise QuadMapError('Component {} has {} variables, expected {}'.format(
                    k + 1, p.m, m))
            if not p.is_homogeneous(2):
                raise QuadMapError(
                    'Component {} is not a homogeneous quadric: {}'.format(k + 1, p))
            for t in p.terms:
                idx = [i for i, e in enumerate(t) for _ in range(e)]
                if idx[0] == idx[1]:
                    q_values[idx[0], k] = 1
                else:
                    table[idx[0], idx[1], k] = table[idx[1], idx[0], k] = 1
        return cls(q_values, table)

    @classmethod
    def from_strings(cls, texts, m):
        return cls.from_polys([parse_poly(t, m) for t in texts], m)

    @classmethod
    def squares(cls, n):
        """The map with class (x_1^2, ..., x_n^2), i.e. (Z/4)^n."""
        return cls(gf2.identity(n), np.zeros((n, n, n), dtype=np.uint8))

    @classmethod
    def direct_sum(cls, *maps):
        m = sum(q.m for q in maps)
        n = sum(q.n for q in maps)
        q_values = gf2.zeros(m, n)
        table = np.zeros((m, m, n), dtype=np.uint8)
        mo = no = 0
        for q in maps:
            q_values[mo:mo + q.m, no:no + q.n] = q.q_values
            table[mo:mo + q.m, mo:mo + q.m, no:no + q.n] = q.b_table
            mo += q.m
            no += q.n
        return cls(q_values, table)

    def _vec(self, w, dim):
        w = gf2.to_gf2(w)
        if w.shape[-1] != dim:
            raise QuadMapError('Vector has {} coordinates, expected {}'.format(w.shape[-1], dim))
        return w

    def eval(self, w):
        """Q(sum a_i w_i) = sum a_i Q(w_i) + sum_{i<j} a_i a_j B(w_i, w_j)."""
        w = self._vec(w, self.m)
        return self.eval_many(w[np.newaxis, :])[0]

    def eval_many(self, points):
        """Evaluates Q on every row of a (N x m) array of points."""
        points = self._vec(points, self.m).astype(np.int64)
        upper = np.triu(np.ones((self.m, self.m), dtype=np.int64), k=1)
        btab = self.b_table.astype(np.int64) * upper[:, :, np.newaxis]
        vals = points @ self.q_values.astype(np.int64)
        vals += np.einsum('ai,aj,ijk->ak', points, points, btab)
        return (vals & 1).astype(np.uint8)

    def polar(self, w, w2):
        """B(w, w2) for vectors, or row-wise for (N x m) arrays."""
        w = self._vec(w, self.m).astype(np.int64)
        w2 = self._vec(w2, self.m).astype(np.int64)
        out = np.einsum('...i,...j,ijk->...k', w, w2, self.b_table.astype(np.int64))
        return (out & 1).astype(np.uint8)

    def polarize(self):
        """Full symmetric table B(w_i, w_j) with zero diagonal."""
        return self.b_table.copy()

    def check_polar_identity(self, cap=10):
        """Checks Q(w+w') + Q(w) + Q(w') = B(w,w') on all pairs of points.
        :raises QuadMapError: with a witness pair when the identity fails.
        """
        check_cap(self.m, cap, 'Polar identity check dimension')
        pts = gf2.all_points(self.m)
        vals = self.eval_many(pts)
        idx = np.arange(len(pts))
        for a in idx:
            sums = self.eval_many(pts[a] ^ pts)
            lhs = sums ^ vals[a] ^ vals
            rhs = self.polar(np.broadcast_to(pts[a], pts.shape), pts)
            bad = np.nonzero((lhs != rhs).any(axis=1))[0]
            if bad.size:
                raise QuadMapError('Polar identity fails at w={}, w\'={}'.format(
                    pts[a].tolist(), pts[bad[0]].tolist()))
        return True

    def extension_class(self):
        """q_k = sum_i Q_k(w_i) x_i^2 + sum_{i<j} B_k(w_i, w_j) x_i x_j."""
        polys = []
        for k in range(self.n):
            terms = []
            for i in range(self.m):
                if self.q_values[i, k]:
                    mono = [0] * self.m
                    mono[i] = 2
                    terms.append(tuple(mono))
                for j in range(i + 1, self.m):
                    if self.b_table[i, j, k]:
                        mono = [0] * self.m
                        mono[i] = mono[j] = 1
                        terms.append(tuple(mono))
            polys.append(Poly(self.m, terms))
        return polys

    def image_span(self):
        """Rows spanning the F_2-span of {Q(w)}: the Q(w_i) and B(w_i, w_j)."""
        iu, ju = np.triu_indices(self.m, k=1)
        return np.vstack([self.q_values, self.b_table[iu, ju]])

    def is_frattini(self):
        """True if the values Q(w) span V."""
        return gf2.rank(self.image_span()) == self.n

    def is_effective(self, cap=EFFECTIVE_CAP, chunk=2**16):
        """True if Q(w)=0 only for w=0, by enumeration of all points of W.
        :raises CapExceeded: if m exceeds `cap`.
        """
        check_cap(self.m, cap, 'Effectiveness enumeration dimension')
        total = 2**self.m
        shifts = np.arange(self.m, dtype=np.int64)
        for start in range(1, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)[:, np.newaxis]
            pts = ((idx >> shifts) & 1).astype(np.uint8)
            if not self.eval_many(pts).any(axis=1).all():
                return False
        return True

    def is_two_power_exact(self, cap=EFFECTIVE_CAP):
        return self.m == self.n and self.is_frattini() and self.is_effective(cap)

    def restrict(self, s_w, s_v):
        """Restriction of Q to span(s_w) -> span(s_v), coordinates in those bases.
        :param s_w numpy.ndarray: (m x a) matrix of independent columns in W.
        :param s_v numpy.ndarray: (n x b) matrix of independent columns in V.
        :raises QuadMapError: if Q(span s_w) is not contained in span(s_v).
        """
        s_w, s_v = _as_columns(s_w, self.m), _as_columns(s_v, self.n)
        a, b = s_w.shape[1], s_v.shape[1]
        cols = s_w.T
        q_vals = self.eval_many(cols)
        pairs = [(i, j) for i in range(a) for j in range(i + 1, a)]
        bvals = (self.polar(cols[[i for i, _ in pairs]], cols[[j for _, j in pairs]])
                 if pairs else gf2.zeros(0, self.n))
        rhs = np.vstack([q_vals, bvals]).T
        if rhs.shape[1] == 0:
            coords = gf2.zeros(b, 0)
        elif b == 0:
            if rhs.any():
                raise QuadMapError('Restriction does not land in the target subspace')
            coords = gf2.zeros(0, rhs.shape[1])
        else:
            try:
                coords = gf2.solve_linear(s_v, rhs).particular
            except gf2.NoSolution as e:
                raise QuadMapError('Restriction does not land in the target subspace') from e
        new_q = coords[:, :a].T
        table = np.zeros((a, a, b), dtype=np.uint8)
        for k, (i, j) in enumerate(pairs):
            table[i, j] = table[j, i] = coords[:, a + k]
        return QuadraticMap(new_q.reshape(a, b), table)

    def precompose(self, f_w):
        """Q o f_W for a linear map f_W given as an (m x a) matrix."""
        cols = _as_columns(f_w, self.m).T
        a = len(cols)
        left = np.broadcast_to(cols[:, np.newaxis, :], (a, a, self.m))
        right = np.broadcast_to(cols[np.newaxis, :, :], (a, a, self.m))
        return QuadraticMap(self.eval_many(cols).reshape(a, self.n), self.polar(left, right))

    def postcompose(self, f_v):
        """f_V o Q for a linear map f_V given as a (c x n) matrix."""
        f_v = gf2.to_gf2(f_v).astype(np.int64)
        if f_v.ndim != 2 or f_v.shape[1] != self.n:
            raise QuadMapError('Expected a matrix with {} columns, got shape {}'.format(
                self.n, f_v.shape))
        return QuadraticMap((self.q_values.astype(np.int64) @ f_v.T) & 1,
                            (self.b_table.astype(np.int64) @ f_v.T) & 1)

    def to_dict(self):
        pairs = []
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if self.b_table[i, j].any():
                    pairs.append({'i': i + 1, 'j': j + 1, 'v': self.b_table[i, j].tolist()})
        return {
            'm': self.m, 'n': self.n, 'Q': self.q_values.tolist(), 'B': pairs,
            'q_polys': [str(p) for p in self.extension_class()],
        }

    @classmethod
    def from_dict(cls, data):
        """Reads the map exchange schema; cross-validates when both forms are present.
        Bilinear entries use 1-based indices i < j.
        """
        try:
            m, n = int(data['m']), int(data['n'])
        except (KeyError, TypeError, ValueError) as e:
            raise QuadMapError('Map data needs integer fields m and n') from e
        by_table = by_polys = None
        if 'Q' in data:
            pairs = {}
            for entry in data.get('B') or []:
                i, j = int(entry['i']) - 1, int(entry['j']) - 1
                if not (0 <= i < j < m):
                    raise QuadMapError('Bilinear entry ({}, {}) invalid for m={}'.format(
                        i + 1, j + 1, m))
                pairs[(i, j)] = _bit_array(entry['v'], 'B({}, {})'.format(i + 1, j + 1))
                if pairs[(i, j)].size != n:
                    raise QuadMapError('B({}, {}) must have length {}'.format(i + 1, j + 1, n))
            q_vals = _bit_array(data['Q'], 'Q')
            if q_vals.size != m * n:
                raise QuadMapError('Q must list {} vectors of length {}'.format(m, n))
            by_table = cls.from_upper(q_vals, pairs, m, n)
        if 'q_polys' in data:
            polys = data['q_polys']
            if len(polys) != n:
                raise QuadMapError('q_polys has {} entries, expected {}'.format(len(polys), n))
            by_polys = cls.from_strings(polys, m)
        if by_table is None and by_polys is None:
            raise QuadMapError('Map data needs Q/B tables or q_polys')
        if by_table is not None and by_polys is not None and by_table != by_polys:
            raise QuadMapError('Q/B tables disagree with q_polys')
        return by_table if by_table is not None else by_polys


def family(kind, size):
    """Q(A) = A^2 + A on gl_n, sl_n or strictly upper triangular u_n over F_2.

    Basis: row-major over admissible positions; the sl_n diagonal position (i, i), i < n,
    stands for E_ii + E_nn. Coordinates of a matrix are its entries at those positions.
    """
    if kind not in FAMILIES:
        raise QuadMapError('Unknown family {!r}, expected one of {}'.format(kind, FAMILIES))
    if size < 1:
        raise QuadMapError('Family size must be at least 1')
    if kind == 'gl':
        positions = [(i, j) for i in range(size) for j in range(size)]
    elif kind == 'sl':
        positions = [(i, j) for i in range(size) for j in range(size)
                     if (i, j) != (size - 1, size - 1)]
    else:
        positions = [(i, j) for i in range(size) for j in range(i + 1, size)]
    basis = []
    for i, j in positions:
        e = gf2.zeros(size, size)
        e[i, j] = 1
        if kind == 'sl' and i == j:
            e[size - 1, size - 1] = 1
        basis.append(e)

    def coords(a):
        return np.array([a[i, j] for i, j in positions], dtype=np.uint8)

    dim = len(positions)
    q_values = gf2.zeros(dim, dim)
    table = np.zeros((dim, dim, dim), dtype=np.uint8)
    for a, ea in enumerate(basis):
        q_values[a] = coords(gf2.matmul(ea, ea) ^ ea)
        for b in range(a + 1, dim):
            eb = basis[b]
            table[a, b] = table[b, a] = coords(gf2.matmul(ea, eb) ^ gf2.matmul(eb, ea))
    logger.debug('    -> built family {}_{} with m=n={}'.format(kind, size, dim))
    return QuadraticMap(q_values, table)


class QuadMorphism(object):

    """Pair (f_W, f_V) of bit matrices from Q1 to Q2."""

    def __init__(self, source, target, f_w, f_v):
        f_w = gf2.to_gf2(f_w).reshape(target.m, source.m)
        f_v = gf2.to_gf2(f_v).reshape(target.n, source.n)
        self.source = source
        self.target = target
        self.f_w = f_w
        self.f_v = f_v

    def __repr__(self):
        return 'QuadMorphism(f_W={}, f_V={})'.format(self.f_w.tolist(), self.f_v.tolist())

    @classmethod
    def identity(cls, q):
        return cls(q, q, gf2.identity(q.m), gf2.identity(q.n))

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, gf2.zeros(target.m, source.m), gf2.zeros(target.n, source.n))

    @classmethod
    def inclusion(cls, target, s_w, s_v):
        """Inclusion of the restriction of `target` to span(s_w) -> span(s_v)."""
        source = target.restrict(s_w, s_v)
        return cls(source, target, s_w, s_v)

    def compose(self, other):
        """self after other."""
        if other.target != self.source:
            raise QuadMapError('Morphisms do not compose')
        return QuadMorphism(other.source, self.target,
                            gf2.matmul(self.f_w, other.f_w), gf2.matmul(self.f_v, other.f_v))

    def verify(self):
        """Q2(f_W w) = f_V Q1(w) on basis vectors and their pairwise sums."""
        m1 = self.source.m
        pts = [gf2.identity(m1)]
        for i in range(m1):
            for j in range(i + 1, m1):
                v = gf2.zeros(m1)
                v[i] = v[j] = 1
                pts.append(v[np.newaxis, :])
        pts = np.vstack(pts).reshape(-1, m1)
        if not len(pts):
            return True
        lhs = self.target.eval_many(gf2.matmul(pts, self.f_w.T))
        rhs = gf2.matmul(self.source.eval_many(pts), self.f_v.T)
        return bool((lhs == rhs).all())

    def pullback_check(self):
        """(f_W)^*(q2) = (f_V)_*(q1) as polynomial columns."""
        m1 = self.source.m
        forms = [Poly.linear_form(self.f_w[a]) for a in range(self.target.m)]
        pulled = [p.substitute(forms) if forms else Poly.zero(m1)
                  for p in self.target.extension_class()]
        q1 = self.source.extension_class()
        pushed = []
        for k in range(self.target.n):
            acc = Poly.zero(m1)
            for l in range(self.source.n):
                if self.f_v[k, l]:
                    acc = acc + q1[l]
            pushed.append(acc)
        return pulled == pushed

    def is_injective(self):
        return (gf2.rank(self.f_w) == self.source.m
                and gf2.rank(self.f_v) == self.source.n)

    def kernel(self):
        """Q1 restricted to ker f_W -> ker f_V."""
        return self.source.restrict(gf2.nullspace(self.f_w).T, gf2.nullspace(self.f_v).T)

    def image(self):
        """Q2 restricted to Im f_W -> Im f_V."""
        return self.target.restrict(gf2.column_space(self.f_w), gf2.column_space(self.f_v))

    def is_normal_embedding(self):
        """B2(f_W(w1), w2) in Im f_V for all basis pairs.
        :raises NotInjective: if f is not injective.
        """
        if not self.is_injective():
            raise NotInjective('Normal embedding test needs an injective morphism')
        red = gf2.row_reduce(self.f_v.T) if self.source.n else None
        images = self.f_w.T
        for a in range(self.source.m):
            for j in range(self.target.m):
                e = gf2.zeros(self.target.m)
                e[j] = 1
                val = self.target.polar(images[a], e)
                if not val.any():
                    continue
                if red is None or not red.contains(val):
                    return False
        return True

    def cokernel(self, check_cap_dim=12):
        """Q2 on W2/Im f_W -> V2/Im f_V using pivot-complement coset representatives.
        :raises NotNormalEmbedding: if f is not a normal embedding.
        """
        if not self.is_normal_embedding():
            raise NotNormalEmbedding('Cokernel needs a normal embedding')
        q2 = self.target
        red_w = gf2.row_reduce(self.f_w.T) if self.source.m else None
        red_v = gf2.row_reduce(self.f_v.T) if self.source.n else None
        _, free_w = gf2.complement_basis(self.f_w.T, q2.m)
        _, free_v = gf2.complement_basis(self.f_v.T, q2.n)

        def coords_v(vals):
            vals = red_v.reduce(vals) if red_v is not None else vals
            return vals[..., free_v]

        reps = gf2.identity(q2.m)[free_w]
        a = len(free_w)
        q_vals = coords_v(q2.eval_many(reps)) if a else gf2.zeros(0, len(free_v))
        table = np.zeros((a, a, len(free_v)), dtype=np.uint8)
        for i in range(a):
            for j in range(i + 1, a):
                table[i, j] = table[j, i] = coords_v(q2.polar(reps[i], reps[j]))
        coker = QuadraticMap(q_vals.reshape(a, len(free_v)), table)
        if q2.m <= check_cap_dim:
            pts = gf2.all_points(q2.m)
            w_coords = (red_w.reduce(pts) if red_w is not None else pts)[:, free_w]
            if not (coords_v(q2.eval_many(pts)) == coker.eval_many(w_coords)).all():
                raise NotNormalEmbedding('Cokernel map is not well defined on cosets')
        else:
            logger.debug('    -> skipped exhaustive cokernel check for m={}'.format(q2.m))
        return coker


def random_map(m, n, rng):
    """Uniformly random quadratic map drawn with a numpy RandomState."""
    q_values = rng.randint(0, 2, size=(m, n))
    upper = rng.randint(0, 2, size=(m, m, n)) * np.triu(np.ones((m, m), dtype=int), 1)[
        :, :, np.newaxis]
    return QuadraticMap(q_values, upper + upper.transpose(1, 0, 2))


def all_maps(m, n):
    """Yields every quadratic map W -> V with dim W = m, dim V = n."""
    monos = monomials_of_degree(m, 2)
    size = len(monos)
    for code in range(2**(size * n)):
        polys = []
        for k in range(n):
            bits = (code >> (k * size)) & ((1 << size) - 1)
            polys.append(Poly(m, [monos[i] for i in range(size) if (bits >> i) & 1]))
        yield QuadraticMap.from_polys(polys, m)
