"""Bockstein closedness of quadratic maps and their representations.

A map is Bockstein closed when beta(q) = L q for a matrix L of linear forms. The solved L
defines a representation of Q on V; general representations are QModule objects (R, T)
with beta(R) + R^2 = T(q).
"""
import numpy as np

from bockstein_quad import P_CHECK_CAP, check_cap, logger
from bockstein_quad import gf2
from bockstein_quad.poly import Poly, PolyMatrix, ShapeError, monomials_of_degree


class NotClosed(Exception):
    """Raised when beta(q) = L q has no solution with linear-form entries."""
    pass


class ModuleFitFailure(Exception):
    """Raised when beta(R) + R^2 is not a combination of the q_j."""
    pass


class LSolution(object):

    """Affine solution set of beta(q) = L q."""

    def __init__(self, particular, kernel_basis):
        self.particular = particular
        self.kernel_basis = kernel_basis

    @property
    def unique(self):
        return not self.kernel_basis

    def to_dict(self):
        return {'L': self.particular.to_strings(), 'unique': self.unique,
                'kernel_dim': len(self.kernel_basis)}


def _linear_multiples(q, m):
    """Columns: coefficients of x_k q_j (column j*m + k) over degree-3 monomials."""
    index = {mono: c for c, mono in enumerate(monomials_of_degree(m, 3))}
    n = len(q)
    cols = gf2.zeros(len(index), n * m)
    for j, qj in enumerate(q):
        for k in range(m):
            cols[:, j * m + k] = (Poly.var(k, m) * qj).coefficients(index)
    return cols, index


def _coeffs_to_matrix(coeffs, n, m):
    """PolyMatrix with L[i, j] = sum_k coeffs[i][j*m + k] x_k."""
    arr = np.zeros((m, n, n), dtype=np.uint8)
    for i in range(n):
        arr[:, i, :] = np.asarray(coeffs[i]).reshape(n, m).T
    return PolyMatrix.from_coefficients(arr)


def solve_L(q):
    """Solves beta(q) = L q for an (n x n) matrix L of linear forms.
    :param q QuadraticMap: the map whose extension class is solved.
    :return: particular solution and a basis of {K : K q = 0}.
    :rtype: LSolution.
    :raises NotClosed: if the coefficient system is inconsistent.
    """
    m, n = q.m, q.n
    polys = q.extension_class()
    logger.debug('    -> solving beta(q) = Lq with {} unknowns'.format(n * n * m))
    if n == 0:
        return LSolution(PolyMatrix.zeros(0, 0, m), [])
    if m == 0:
        return LSolution(PolyMatrix.zeros(n, n, 0), [])
    cols, index = _linear_multiples(polys, m)
    rhs = np.stack([p.bockstein().coefficients(index) for p in polys], axis=1)
    try:
        sol = gf2.solve_linear(cols, rhs)
    except gf2.NoSolution as e:
        raise NotClosed('beta(q) is not of the form Lq') from e
    particular = _coeffs_to_matrix(sol.particular.T, n, m)
    kernel = []
    for i in range(n):
        for vec in sol.kernel:
            rows = gf2.zeros(n, n * m)
            rows[i] = vec
            kernel.append(_coeffs_to_matrix(rows, n, m))
    return LSolution(particular, kernel)


def is_bockstein_closed(q):
    try:
        solve_L(q)
    except NotClosed:
        return False
    return True


def t_of_q(T, q_polys, m):
    """The polynomial matrix T(q) = sum_j T_j q_j."""
    T = np.asarray(T)
    k = T.shape[1]
    entries = [[Poly.zero(m) for _ in range(k)] for _ in range(k)]
    for j, qj in enumerate(q_polys):
        for a, b in zip(*np.nonzero(T[j])):
            entries[a][b] = entries[a][b] + qj
    return PolyMatrix(entries, m)


def fit_T(S, q_polys, m):
    """Writes each entry of a degree-2 polynomial matrix S as sum_j T_j[a, b] q_j.
    :return: (n, k, k) array T.
    :raises ModuleFitFailure: if some entry is not in the span of the q_j.
    """
    n, k = len(q_polys), S.rows
    if not S:
        return np.zeros((n, k, k), dtype=np.uint8)
    index = {mono: c for c, mono in enumerate(monomials_of_degree(m, 2))}
    qmat = (np.stack([p.coefficients(index) for p in q_polys], axis=1) if n
            else gf2.zeros(len(index), 0))
    try:
        rhs = np.stack([S[a, b].coefficients(index) for a in range(k) for b in range(k)],
                       axis=1)
    except ShapeError as e:
        raise ModuleFitFailure('Entries of beta(R)+R^2 must be quadrics') from e
    try:
        sol = gf2.solve_linear(qmat, rhs).particular
    except gf2.NoSolution as e:
        raise ModuleFitFailure('beta(R)+R^2 is not a combination of the components of q') from e
    return sol.reshape(n, k, k)


class QModule(object):

    """Representation of Q on U = F_2^k.

    `R` is a (k x k) PolyMatrix of linear forms in x_1..x_m encoding rho_W and `T` an
    (n, k, k) array of scalar matrices encoding rho_V.
    """

    def __init__(self, R, T, name='module'):
        T = gf2.to_gf2(T)
        if not R.is_linear():
            raise ShapeError('R must have linear-form entries')
        if R.rows != R.cols or T.ndim != 3 or T.shape[1:] != (R.rows, R.rows):
            raise ShapeError('R is {} and T has shape {}'.format(R.shape, T.shape))
        self.R = R
        self.T = T
        self.name = name

    @property
    def k(self):
        return self.R.rows

    @property
    def m(self):
        return self.R.m

    @property
    def n(self):
        return self.T.shape[0]

    @classmethod
    def trivial(cls, q, k=1):
        return cls(PolyMatrix.zeros(k, k, q.m), np.zeros((q.n, k, k), dtype=np.uint8),
                   name='trivial')

    def is_trivial(self):
        return not self.R and not self.T.any()

    def rho_w(self, w):
        return self.R.evaluate(w)

    def rho_v(self, v):
        v = gf2.to_gf2(v)
        return (np.tensordot(v.astype(np.int64), self.T.astype(np.int64), axes=1) & 1).astype(
            np.uint8)

    def to_dict(self):
        return {'name': self.name, 'k': self.k, 'R': self.R.to_strings(),
                'T': self.T.tolist()}


def check_representation(module, q):
    """True iff beta(R) + R^2 = T(q) exactly in F_2[x]."""
    if module.m != q.m or module.n != q.n:
        return False
    lhs = module.R.bockstein() + module.R @ module.R
    return lhs == t_of_q(module.T, q.extension_class(), q.m)


def module_from_L(q, L):
    """The representation of Q on V defined by a solution L of beta(q) = L q.
    :raises ModuleFitFailure: if beta(L) + L^2 leaves the span of the q_j.
    """
    S = L.bockstein() + L @ L
    T = fit_T(S, q.extension_class(), q.m)
    return QModule(L, T, name='L')


def check_P(q, cap=P_CHECK_CAP, chunk=64):
    """Looks for a bilinear P: V x W -> V with P(Q(w), w') = B(w, w') + P(B(w, w'), w).

    Every pair of points of W contributes one equation per coordinate of V; rows are
    reduced incrementally so only a basis of the system is held.
    :return: (n, m, n) array with P[a, b] = P(v_a, w_b), or None if no P exists.
    :raises CapExceeded: if m or n exceeds `cap`.
    """
    check_cap(max(q.m, q.n), cap, 'P-characterization dimension')
    m, n = q.m, q.n
    nm = n * m
    if nm == 0:
        return np.zeros((n, m, n), dtype=np.uint8)
    pts = gf2.all_points(m)
    qvals = q.eval_many(pts)
    basis = gf2.zeros(0, nm + n)
    red = None
    for start in range(0, len(pts), chunk):
        blocks = []
        for i in range(start, min(len(pts), start + chunk)):
            w = pts[i]
            bvals = q.polar(np.broadcast_to(w, pts.shape), pts)
            rows = (qvals[i][np.newaxis, :, np.newaxis] * pts[:, np.newaxis, :]) ^ (
                bvals[:, :, np.newaxis] * w[np.newaxis, np.newaxis, :])
            blocks.append(np.hstack([rows.reshape(len(pts), nm), bvals]))
        aug = np.unique(np.vstack(blocks), axis=0)
        if red is not None:
            aug = red.reduce(aug)
        aug = aug[aug.any(axis=1)]
        if not len(aug):
            continue
        red = gf2.row_reduce(np.vstack([basis, aug]))
        basis = red.basis.copy()
        if red.pivots and red.pivots[-1] >= nm:
            logger.debug('    -> P system inconsistent')
            return None
    x = gf2.zeros(nm, n)
    for i, p in enumerate(red.pivots if red is not None else []):
        x[p] = basis[i, nm:]
    return x.reshape(n, m, n)


def apply_P(P, v, w):
    out = np.einsum('a,b,abc->c', gf2.to_gf2(v).astype(np.int64),
                    gf2.to_gf2(w).astype(np.int64), P.astype(np.int64))
    return (out & 1).astype(np.uint8)


def t_to_z(T):
    """Z with Z(i)[a, j] = T(j)[a, i], as a (k x n) PolyMatrix in z_1..z_k."""
    T = gf2.to_gf2(T)
    n, k = T.shape[0], T.shape[1]
    coeffs = np.zeros((k, k, n), dtype=np.uint8)
    for i in range(k):
        coeffs[i] = T[:, :, i].T
    return PolyMatrix.from_coefficients(coeffs)


def z_to_t(Z):
    """Inverse of t_to_z."""
    if not Z.is_linear() or Z.m != Z.rows:
        raise ShapeError('Z must be (k x n) with linear entries in k variables')
    coeffs = Z.coefficient_matrices()
    k, n = Z.rows, Z.cols
    T = np.zeros((n, k, k), dtype=np.uint8)
    for i in range(k):
        T[:, :, i] = coeffs[i].T
    return T


def adjoint_identity(T, q_polys, m):
    """Checks Z q = T(q) z in F_2[x_1..x_m, z_1..z_k]."""
    T = gf2.to_gf2(T)
    k = T.shape[1]
    total = m + k
    Z = t_to_z(T).embed(total, offset=m)
    q_big = [p.embed(total) for p in q_polys]
    z = [Poly.var(m + i, total) for i in range(k)]
    return Z.apply(q_big) == t_of_q(T, q_big, total).apply(z)
