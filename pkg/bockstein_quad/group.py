"""The finite 2-group G(Q) on pairs (v, w) with (v,w)(v',w') = (v+v'+f(w,w'), w+w').

Elements are integers g = v | (w << n) with v in F_2^n and w in F_2^m given by their bits.
The factor set is the bilinear map with f(w_i, w_j) = B(w_i, w_j) for i < j,
f(w_i, w_i) = Q(w_i) and 0 for i > j.
"""
import numpy as np

from bockstein_quad import GROUP_CAP, check_cap, logger
from bockstein_quad import gf2

ASSOCIATIVITY_CAP = 21
REALIZE_DIM_CAP = 10
LOOKUP_DIM = 10
SAMPLE_SIZE = 4096


class StructureError(Exception):

    """A group identity failed; `witness` holds the offending elements."""

    def __init__(self, message, witness=None):
        super().__init__('{} (witness: {})'.format(message, witness))
        self.witness = witness


class ConsistencyFailure(Exception):
    pass


def _bits(values, width):
    values = np.asarray(values, dtype=np.int64)
    return ((values[..., np.newaxis] >> np.arange(width, dtype=np.int64)) & 1).astype(np.int64)


def _ints(bits):
    bits = np.asarray(bits, dtype=np.int64)
    return (bits << np.arange(bits.shape[-1], dtype=np.int64)).sum(axis=-1)


class FiniteTwoGroup(object):

    def __init__(self, q, overrides=None):
        self.q = q
        self.m, self.n = q.m, q.n
        table = np.zeros((self.m, self.m, self.n), dtype=np.int64)
        for i in range(self.m):
            table[i, i] = q.q_values[i]
            for j in range(i + 1, self.m):
                table[i, j] = q.b_table[i, j]
        self.factor_table = table
        self.overrides = dict(overrides or {})
        self.vmask = (1 << self.n) - 1
        self._lookup = None

    @property
    def order(self):
        return 2**(self.m + self.n)

    def elements(self):
        return np.arange(self.order, dtype=np.int64)

    def element(self, v, w):
        return int(_ints(gf2.to_gf2(v))) | (int(_ints(gf2.to_gf2(w))) << self.n)

    def split(self, g):
        g = np.asarray(g, dtype=np.int64)
        return g & self.vmask, g >> self.n

    def factor(self, wa, wb):
        """f(w, w') as integers, for integer arrays of W-elements."""
        wa = np.asarray(wa, dtype=np.int64)
        wb = np.asarray(wb, dtype=np.int64)
        if self._lookup is None and 0 < self.m <= LOOKUP_DIM:
            w = np.arange(2**self.m, dtype=np.int64)
            self._lookup = self._factor(w[:, np.newaxis], w[np.newaxis, :])
        if self._lookup is not None:
            return self._lookup[wa, wb]
        return self._factor(wa, wb)

    def _factor(self, wa, wb):
        if self.m == 0 or self.n == 0:
            vals = np.zeros(np.broadcast(wa, wb).shape, dtype=np.int64)
        else:
            vals = np.einsum('...i,...j,ijk->...k', _bits(wa, self.m), _bits(wb, self.m),
                             self.factor_table) & 1
            vals = _ints(vals)
        for (x, y), v in self.overrides.items():
            vals = np.where((wa == x) & (wb == y), v, vals)
        return vals

    def mul(self, a, b):
        va, wa = self.split(a)
        vb, wb = self.split(b)
        return (va ^ vb ^ self.factor(wa, wb)) | ((wa ^ wb) << self.n)

    def inverse(self, g):
        v, w = self.split(g)
        return (v ^ self.factor(w, w)) | (w << self.n)

    def power(self, g, k):
        out = np.zeros_like(np.asarray(g, dtype=np.int64))
        for _ in range(k):
            out = self.mul(out, g)
        return out

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.inverse(self.mul(b, a)))

    def generators(self):
        return [1 << j for j in range(self.n)] + [1 << (self.n + i) for i in range(self.m)]

    def is_abelian(self):
        g = self.elements()
        return all((self.mul(g, h) == self.mul(h, g)).all() for h in self.generators())

    def write_table(self, fh):
        """Writes one line 'a b ab' per ordered pair of elements."""
        g = self.elements()
        for a in g:
            prods = self.mul(np.full_like(g, a), g)
            for b, ab in zip(g, prods):
                fh.write('{} {} {}\n'.format(int(a), int(b), int(ab)))


def build_group(q, cap=GROUP_CAP, overrides=None):
    """G(Q) by factor-set multiplication.
    :raises CapExceeded: if 2^(m+n) exceeds `cap`.
    """
    check_cap(2**(q.m + q.n), cap, 'Group order')
    logger.info('Building group of order {}'.format(2**(q.m + q.n)))
    return FiniteTwoGroup(q, overrides)


class StructureReport(object):

    def __init__(self):
        self.checks = {}
        self.witnesses = {}

    def record(self, name, ok, witness=None):
        self.checks[name] = bool(ok)
        if not ok:
            self.witnesses[name] = witness

    @property
    def ok(self):
        return all(self.checks.values())

    def require(self):
        for name, ok in self.checks.items():
            if not ok:
                raise StructureError('Group identity {} fails'.format(name), self.witnesses[name])
        return self

    def to_dict(self):
        return {'ok': self.ok, 'checks': dict(self.checks),
                'witnesses': {k: [int(x) for x in v] for k, v in self.witnesses.items()}}


def _first(mask, *arrays):
    idx = int(np.nonzero(mask)[0][0])
    return [int(a[idx]) for a in arrays]


def verify_structure(group, q, associativity_cap=ASSOCIATIVITY_CAP, seed=0):
    """Exhaustively checks the group laws and the dictionary with (Q, B).

    Associativity is checked on all triples of lifts (0, w) when 3m <= associativity_cap
    (the V-parts enter additively) and on a seeded sample of full triples otherwise.
    """
    report = StructureReport()
    n, m = group.n, group.m
    g = group.elements()
    lifts = np.arange(2**m, dtype=np.int64) << n
    if 3 * m <= associativity_cap:
        ok, witness = True, None
        for a in lifts:
            b, c = np.meshgrid(lifts, lifts, indexing='ij')
            b, c = b.ravel(), c.ravel()
            a_arr = np.full_like(b, a)
            lhs = group.mul(group.mul(a_arr, b), c)
            rhs = group.mul(a_arr, group.mul(b, c))
            bad = lhs != rhs
            if bad.any():
                ok, witness = False, _first(bad, a_arr, b, c)
                break
    else:
        rng = np.random.RandomState(seed)
        a, b, c = (rng.randint(0, group.order, SAMPLE_SIZE) for _ in range(3))
        bad = group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c))
        ok = not bad.any()
        witness = _first(bad, a, b, c) if not ok else None
    report.record('associativity', ok, witness)

    w = np.arange(2**m, dtype=np.int64)
    sq = group.mul(w << n, w << n)
    expected = _ints(q.eval_many(_bits(w, m))) if n else np.zeros_like(w)
    bad = sq != expected
    report.record('squares', not bad.any(), _first(bad, w) if bad.any() else None)

    wa, wb = np.meshgrid(w, w, indexing='ij')
    wa, wb = wa.ravel(), wb.ravel()
    comm = group.commutator(wa << n, wb << n)
    expected = (_ints(q.polar(_bits(wa, m), _bits(wb, m))) if n and m
                else np.zeros_like(wa))
    bad = comm != expected
    report.record('commutators', not bad.any(), _first(bad, wa, wb) if bad.any() else None)

    ok, witness = True, None
    for j in range(n):
        vj = np.full_like(g, 1 << j)
        bad = group.mul(vj, g) != group.mul(g, vj)
        if bad.any():
            ok, witness = False, [1 << j] + _first(bad, g)
            break
    report.record('v_central', ok, witness)

    sq_all = group.mul(g, g)
    bad = (sq_all >> n) != 0
    report.record('quotient_elementary_abelian', not bad.any(),
                  _first(bad, g) if bad.any() else None)

    bad = group.mul(sq_all, sq_all) != 0
    report.record('exponent_divides_4', not bad.any(), _first(bad, g) if bad.any() else None)
    logger.debug('    -> structure checks: {}'.format(report.checks))
    return report


def center(group):
    """Elements commuting with every generator (0, w_i) and (v_j, 0)."""
    g = group.elements()
    mask = np.ones(len(g), dtype=bool)
    for h in group.generators():
        hh = np.full_like(g, h)
        mask &= group.mul(g, hh) == group.mul(hh, g)
    return g[mask]


def _closure(group, gens):
    members = np.zeros(group.order, dtype=bool)
    members[0] = True
    frontier = np.array([0], dtype=np.int64)
    gens = np.unique(np.asarray(gens, dtype=np.int64))
    while len(frontier):
        prods = group.mul(frontier[:, np.newaxis], gens[np.newaxis, :]).ravel()
        new = np.unique(prods[~members[prods]])
        members[new] = True
        frontier = new
    return np.nonzero(members)[0]


def frattini(group):
    """Subgroup generated by squares and commutators."""
    g = group.elements()
    squares = group.mul(g, g)
    gens = list(squares)
    for a in group.generators():
        for b in group.generators():
            gens.append(int(group.commutator(a, b)))
    return _closure(group, gens)


def two_rank(group):
    """Largest rank of an elementary abelian subgroup.

    Maximal elementary abelian subgroups contain the central subgroup V of exponent 2, so
    the search runs over commuting involution cosets (0, w) extending V.
    """
    n, m = group.n, group.m
    g = group.elements()
    squares = group.mul(g, g)
    bad = (squares != 0) & ((g >> n) == 0)
    if bad.any():
        raise StructureError('V is not elementary abelian', _first(bad, g))
    invol = g[squares == 0]
    w_part = group.split(invol)[1]
    cands = sorted(set(int(x) for x in w_part if x))
    rep = {}
    for x in cands:
        rep[x] = int(invol[(w_part == x)][0])
    commute = {}
    for x in cands:
        arr = np.array([rep[y] for y in cands], dtype=np.int64)
        mask = group.mul(np.full_like(arr, rep[x]), arr) == group.mul(arr, np.full_like(
            arr, rep[x]))
        commute[x] = {y for y, ok in zip(cands, mask) if ok}
    best = [0]

    def span_of(basis):
        span = {0}
        for b in basis:
            span |= {s ^ b for s in span}
        return span

    def dfs(basis, options):
        best[0] = max(best[0], len(basis))
        if len(basis) + _max_rank(options) <= best[0]:
            return
        span = span_of(basis)
        for k, x in enumerate(options):
            if x in span:
                continue
            new_span = span | {s ^ x for s in span}
            if not all(s in rep for s in new_span if s):
                continue
            rest = [y for y in options[k + 1:] if y in commute[x]]
            dfs(basis + [x], rest)

    dfs([], cands)
    logger.debug('    -> two-rank search over {} involution cosets'.format(len(cands)))
    return n + best[0]


def _max_rank(options):
    if not options:
        return 0
    return gf2.rank(np.array([[(x >> i) & 1 for i in range(max(options).bit_length())]
                              for x in options], dtype=np.uint8))


class GroupHomomorphism(object):

    """Map G1 -> G2, f_G(v, w) = (f_V v + t(w), f_W w), stored as a table on G1."""

    def __init__(self, source, target, table, t_values):
        self.source = source
        self.target = target
        self.table = table
        self.t_values = t_values

    def __call__(self, g):
        return self.table[np.asarray(g, dtype=np.int64)]

    def verify(self, chunk=1024):
        """f(gh) = f(g) f(h) for every pair of elements."""
        g = self.source.elements()
        for start in range(0, len(g), chunk):
            a = g[start:start + chunk]
            aa, bb = np.meshgrid(a, g, indexing='ij')
            aa, bb = aa.ravel(), bb.ravel()
            lhs = self.table[self.source.mul(aa, bb)]
            rhs = self.target.mul(self.table[aa], self.table[bb])
            if (lhs != rhs).any():
                return False
        return True


def realize_morphism(phi, g1, g2, dim_cap=REALIZE_DIM_CAP):
    """Solves t(w') + t(w+w') + t(w) = f2(f_W w, f_W w') + f_V f1(w, w') with t(0) = 0.

    t is fixed on the basis by t(w_i) = 0 and extended over W by the equations for the
    pairs (w, w_i) with w < w_i; the remaining equations are then checked on all pairs.
    :return: verified homomorphism G1 -> G2.
    :rtype: GroupHomomorphism.
    :raises ConsistencyFailure: if the system is inconsistent or the result is not a
    homomorphism.
    """
    m1 = g1.m
    check_cap(m1, dim_cap, 'Realization dimension')
    size = 2**m1
    fw = gf2.to_gf2(phi.f_w).astype(np.int64)
    fv = gf2.to_gf2(phi.f_v).astype(np.int64)

    def lin(mat, vals, width):
        if mat.size == 0:
            return np.zeros(np.shape(vals), dtype=np.int64)
        return _ints((_bits(vals, width) @ mat.T) & 1)

    def rhs(wa, wb):
        return g2.factor(lin(fw, wa, m1), lin(fw, wb, m1)) ^ lin(fv, g1.factor(wa, wb), g1.n)

    t = np.zeros(size, dtype=np.int64)
    for i in range(m1):
        low = np.arange(1 << i, dtype=np.int64)
        t[low + (1 << i)] = t[low] ^ rhs(low, np.full_like(low, 1 << i))
    w = np.arange(size, dtype=np.int64)
    wa, wb = np.meshgrid(w, w, indexing='ij')
    if (t[wa] ^ t[wa ^ wb] ^ t[wb] ^ rhs(wa, wb)).any():
        raise ConsistencyFailure('Coboundary system for t is inconsistent')
    elems = g1.elements()
    v, wv = g1.split(elems)
    table = (lin(fv, v, g1.n) ^ t[wv]) | (lin(fw, wv, m1) << g2.n)
    hom = GroupHomomorphism(g1, g2, table, t)
    if not hom.verify():
        raise ConsistencyFailure('Realized map is not a homomorphism')
    return hom


class LatticeM(object):

    """Z/4-lattice (Z/4)^n with W acting by w -> I + 2 L(w) mod 4."""

    def __init__(self, L):
        self.L = L
        self.n = L.rows
        self.m = L.m

    def action(self, w):
        return (np.eye(self.n, dtype=np.int64) + 2 * self.L.evaluate(w).astype(np.int64)) % 4

    def verify(self, cap=12):
        """(I + 2L(w))(I + 2L(w')) = I + 2L(w + w') mod 4 on all pairs."""
        check_cap(self.m, cap, 'Lattice check dimension')
        pts = gf2.all_points(self.m)
        acts = np.array([self.action(p) for p in pts])
        for a, pa in enumerate(pts):
            prods = np.einsum('ij,bjk->bik', acts[a], acts) % 4
            sums = acts[_ints(pa ^ pts)]
            if (prods != sums).any():
                return False
        return True


def lattice_M(L, cap=12):
    lattice = LatticeM(L)
    if not lattice.verify(cap):
        raise ConsistencyFailure('I + 2L(w) is not multiplicative mod 4')
    return lattice
