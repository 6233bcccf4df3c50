"""Exact linear algebra over F_2 on numpy uint8 arrays.

Vectors are 1-d arrays and matrices are 2-d arrays holding 0/1 entries. Row reduction
always takes the leftmost available pivot so results are reproducible.
"""
import numpy as np


class NoSolution(Exception):
    """Raised when a linear system over F_2 is inconsistent."""
    pass


class ShapeError(Exception):
    pass


def to_gf2(a):
    """Return `a` as a uint8 array reduced mod 2."""
    return (np.asarray(a, dtype=np.int64) & 1).astype(np.uint8)


def zeros(rows, cols=None):
    if cols is None:
        return np.zeros(rows, dtype=np.uint8)
    return np.zeros((rows, cols), dtype=np.uint8)


def identity(n):
    return np.eye(n, dtype=np.uint8)


def matmul(a, b):
    """Matrix product over F_2."""
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    return ((a @ b) & 1).astype(np.uint8)


def int_to_bits(value, length):
    """Return the bit vector (least significant bit first) of integer `value`."""
    return np.array([(value >> i) & 1 for i in range(length)], dtype=np.uint8)


def bits_to_int(bits):
    return int(sum(int(b) << i for i, b in enumerate(bits)))


def all_points(dim):
    """Return a (2^dim x dim) array whose row k holds the bits of k."""
    idx = np.arange(2**dim, dtype=np.int64)[:, np.newaxis]
    return ((idx >> np.arange(dim, dtype=np.int64)) & 1).astype(np.uint8)


class RowReduction(object):

    """Reduced row echelon form of a matrix over F_2.

    `matrix` is the RREF, `pivots` the pivot column of each nonzero row and, when row
    operations were tracked, `transform` is the invertible matrix with
    transform @ original = matrix.
    """

    def __init__(self, matrix, pivots, transform=None):
        self.matrix = matrix
        self.pivots = pivots
        self.transform = transform

    @property
    def rank(self):
        return len(self.pivots)

    @property
    def basis(self):
        """Nonzero rows of the RREF."""
        return self.matrix[:self.rank]

    def reduce(self, v):
        """Reduces vector(s) `v` modulo the row space.
        :param v numpy.ndarray: vector, or 2-d array with one vector per row.
        :return: reduced copy of `v` with zeros in every pivot column.
        :rtype: numpy.ndarray.
        """
        out = to_gf2(v).copy()
        single = out.ndim == 1
        if single:
            out = out[np.newaxis, :]
        for i, c in enumerate(self.pivots):
            hit = out[:, c] == 1
            if hit.any():
                out[hit] ^= self.matrix[i]
        return out[0] if single else out

    def contains(self, v):
        return not self.reduce(v).any()


def row_reduce(a, track=False):
    """Computes the reduced row echelon form of `a` over F_2.
    :param a numpy.ndarray: 2-d 0/1 array.
    :param track bool (optional): record the row operations in `transform`.
    :return: RowReduction for `a`.
    :rtype: RowReduction.
    """
    r_mat = to_gf2(a).copy()
    if r_mat.ndim != 2:
        raise ShapeError('Expected a 2-d array, got shape {}'.format(r_mat.shape))
    nrows, ncols = r_mat.shape
    transform = identity(nrows) if track else None
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        hits = np.nonzero(r_mat[row:, col])[0]
        if not hits.size:
            continue
        p = row + int(hits[0])
        if p != row:
            r_mat[[row, p]] = r_mat[[p, row]]
            if track:
                transform[[row, p]] = transform[[p, row]]
        ones = np.nonzero(r_mat[:, col])[0]
        ones = ones[ones != row]
        if ones.size:
            r_mat[ones] ^= r_mat[row]
            if track:
                transform[ones] ^= transform[row]
        pivots.append(col)
        row += 1
    return RowReduction(r_mat, pivots, transform)


def rank(a):
    a = to_gf2(a)
    if a.size == 0:
        return 0
    return row_reduce(a).rank


def nullspace(a):
    """Returns a basis of {x : a x = 0}, one basis vector per row.
    :param a numpy.ndarray: 2-d 0/1 array.
    :return: (k x cols) array, k = cols - rank.
    :rtype: numpy.ndarray.
    """
    a = to_gf2(a)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return identity(ncols)
    red = row_reduce(a)
    free = [c for c in range(ncols) if c not in set(red.pivots)]
    basis = zeros(len(free), ncols)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(red.pivots):
            basis[k, p] = red.matrix[i, f]
    return basis


def left_nullspace(a):
    """Returns a basis of {c : c a = 0}, one basis vector per row."""
    a = to_gf2(a)
    if a.shape[1] == 0:
        return identity(a.shape[0])
    red = row_reduce(a, track=True)
    return red.transform[red.rank:].copy()


def column_space(a):
    """Returns the pivot columns of `a`, a basis of its column space (as columns)."""
    a = to_gf2(a)
    if a.shape[1] == 0 or a.shape[0] == 0:
        return zeros(a.shape[0], 0)
    red = row_reduce(a)
    return a[:, red.pivots].copy()


def complement_basis(rows, dim):
    """Standard basis vectors at the non-pivot columns of RREF(rows); their images span a
    complement of the row space and give canonical coset representatives.
    :param rows numpy.ndarray: (k x dim) array spanning a subspace.
    :param dim int: ambient dimension.
    :return: tuple of the complement (one vector per row) and the non-pivot columns.
    :rtype: tuple.
    """
    rows = to_gf2(rows)
    if rows.ndim == 1:
        rows = rows[np.newaxis, :]
    pivots = set(row_reduce(rows).pivots) if rows.size else set()
    free = [c for c in range(dim) if c not in pivots]
    comp = zeros(len(free), dim)
    for k, c in enumerate(free):
        comp[k, c] = 1
    return comp, free


class SolutionSet(object):

    """Affine solution set of A x = b: `particular` plus the span of `kernel` rows.

    When b has several columns, `particular` has one column per right hand side.
    """

    def __init__(self, particular, kernel):
        self.particular = particular
        self.kernel = kernel

    @property
    def unique(self):
        return self.kernel.shape[0] == 0


def solve_linear(a, b):
    """Solves A x = b over F_2.
    :param a numpy.ndarray: (r x c) coefficient matrix.
    :param b numpy.ndarray: length-r vector or (r x k) matrix of right hand sides.
    :return: canonical particular solution (free variables set to zero) and a kernel basis.
    :rtype: SolutionSet.
    :raises NoSolution: if rank[A|b] > rank[A] for some column of b.
    :raises ShapeError: if A and b have different numbers of rows.
    """
    a = to_gf2(a)
    b = to_gf2(b)
    vector = b.ndim == 1
    if vector:
        b = b[:, np.newaxis]
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ShapeError(
            'Cannot solve system with A of shape {} and b of shape {}'.format(a.shape, b.shape)
        )
    nrows, ncols = a.shape
    if nrows == 0:
        x = zeros(ncols, b.shape[1])
        return SolutionSet(x[:, 0] if vector else x, identity(ncols))
    red = row_reduce(a, track=True)
    tb = matmul(red.transform, b)
    if tb[red.rank:].any():
        raise NoSolution('Linear system over F_2 is inconsistent.')
    x = zeros(ncols, b.shape[1])
    for i, p in enumerate(red.pivots):
        x[p] = tb[i]
    free = [c for c in range(ncols) if c not in set(red.pivots)]
    kernel = zeros(len(free), ncols)
    for k, f in enumerate(free):
        kernel[k, f] = 1
        for i, p in enumerate(red.pivots):
            kernel[k, p] = red.matrix[i, f]
    return SolutionSet(x[:, 0] if vector else x, kernel)


def span_elements(rows):
    """Returns every element of the span of `rows` (2^k x dim array, k = number of rows)."""
    rows = to_gf2(rows)
    k = rows.shape[0]
    coeffs = all_points(k)
    return matmul(coeffs, rows)
