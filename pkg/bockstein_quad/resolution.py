"""Minimal free resolution of F_2 over F_2 G and the Betti numbers of G(Q).

A free module F_2 G^r is stored as bit vectors of length r * |G|, block j holding the
coefficients of the j-th generator on the group elements. G acts from the left by
permuting the positions inside every block.
"""
import numpy as np

from bockstein_quad import BETTI_DEGREE_CAP, BETTI_ORDER_CAP, check_cap, logger
from bockstein_quad import gf2
from bockstein_quad.ideal import QuotientAlgebra, inverse_series, series_product


class RelabelledGroup(object):

    """The same group with its elements renamed by a permutation `perm` (old -> new)."""

    def __init__(self, group, perm):
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(group.order)):
            raise ValueError('Relabelling is not a permutation of the group elements')
        self.group = group
        self.perm = perm
        self.inv = np.argsort(perm)
        self.order = group.order

    def mul(self, a, b):
        return self.perm[self.group.mul(self.inv[a], self.inv[b])]

    def generators(self):
        return [int(self.perm[g]) for g in self.group.generators()]


def _left_action(group, h, rows, blocks):
    """h . y for every row y of an (N x blocks*|G|) array."""
    order = group.order
    perm = group.mul(np.full(order, h, dtype=np.int64), np.arange(order, dtype=np.int64))
    out = np.zeros_like(rows)
    for j in range(blocks):
        out[:, j * order + perm] = rows[:, j * order:(j + 1) * order]
    return out


def _radical_part(group, kernel, blocks):
    """Basis of I K where I is the augmentation ideal; generators of G suffice."""
    parts = [_left_action(group, g, kernel, blocks) ^ kernel for g in group.generators()]
    if not parts:
        return gf2.zeros(0, kernel.shape[1])
    return gf2.row_reduce(np.vstack(parts)).basis


def _minimal_generators(group, kernel, blocks):
    """Basis vectors of K completing a basis of I K, i.e. generators of K / I K."""
    # reduced rows vanish on the pivots of I K, so they are independent modulo I K
    radical = gf2.row_reduce(_radical_part(group, kernel, blocks))
    return gf2.row_reduce(radical.reduce(kernel)).basis


class Resolution(object):

    """Betti numbers b_0..b_max_degree and the boundary images of each free module.

    `images[i - 1]` holds d_i of the generators of F_i as rows in F_{i-1}.
    """

    def __init__(self, betti, images, group=None):
        self.betti = betti
        self.images = images
        self.group = group

    def boundary(self, i, y):
        """d_i(y) for y in F_i; d_0 is the augmentation F_0 -> F_2."""
        y = gf2.to_gf2(y)
        if i == 0:
            return gf2.to_gf2([y.sum()])
        gens = self.images[i - 1]
        order = self.group.order
        blocks = gens.shape[1] // order
        out = gf2.zeros(gens.shape[1])
        for j in range(len(gens)):
            for h in np.nonzero(y[j * order:(j + 1) * order])[0]:
                out ^= _left_action(self.group, int(h), gens[j:j + 1], blocks)[0]
        return out

    def to_dict(self):
        return {'betti': list(self.betti)}


def minimal_resolution(group, max_degree):
    """Builds F_i -> ... -> F_0 -> F_2 with each F_{i+1} mapping onto a minimal
    generating set of ker(F_i -> F_{i-1}).
    """
    order = group.order
    betti = [1]
    images = []
    kernel = gf2.nullspace(np.ones((1, order), dtype=np.uint8))
    blocks = 1
    for i in range(1, max_degree + 1):
        gens = _minimal_generators(group, kernel, blocks)
        b = len(gens)
        betti.append(b)
        logger.debug('    -> b_{} = {}'.format(i, b))
        images.append(gens)
        if i == max_degree or b == 0:
            break
        rows = np.vstack([_left_action(group, h, gens, blocks) for h in range(order)])
        # row h*b + j is h . y_j; reorder to block-major j*order + h
        rows = rows.reshape(order, b, -1).transpose(1, 0, 2).reshape(b * order, -1)
        kernel = gf2.left_nullspace(rows)
        blocks = b
    betti += [0] * (max_degree + 1 - len(betti))
    return Resolution(betti, images, group)


def betti_numbers(group, max_degree, order_cap=BETTI_ORDER_CAP,
                  degree_cap=BETTI_DEGREE_CAP, relabel=None):
    """Betti numbers b_i = dim Ext^i_{F_2 G}(F_2, F_2) for i <= max_degree.
    :param relabel: optional permutation of the elements, the result is invariant under it.
    :raises CapExceeded: if |G| or the degree exceed their caps.
    """
    check_cap(group.order, order_cap, 'Group order for resolution')
    check_cap(max_degree, degree_cap, 'Resolution degree')
    logger.info('Resolving F_2 over a group of order {} up to degree {}'.format(
        group.order, max_degree))
    if relabel is not None:
        group = RelabelledGroup(group, relabel)
    return minimal_resolution(group, max_degree).betti


def predicted_betti(q, max_degree):
    """Hilb(A*(Q), t) / (1 - t^2)^n truncated after degree max_degree."""
    length = max_degree + 1
    hilb = QuotientAlgebra(q.extension_class(), q.m, max_degree).dims
    return series_product(hilb, inverse_series(q.n, 2, length), length)


def poincare_check(q, group, max_degree, order_cap=BETTI_ORDER_CAP,
                   degree_cap=BETTI_DEGREE_CAP):
    """Compares the measured Betti numbers with the series predicted from A*(Q)."""
    betti = betti_numbers(group, max_degree, order_cap, degree_cap)
    predicted = predicted_betti(q, max_degree)
    return {'betti': betti, 'predicted': predicted, 'match': betti == predicted}


def frattini_rank_check(q, betti):
    """b_1 is the rank of G / Phi(G), equal to m exactly when V is the Frattini subgroup."""
    return len(betti) < 2 or (betti[1] == q.m) == bool(q.is_frattini())
