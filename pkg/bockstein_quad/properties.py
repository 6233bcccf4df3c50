"""Seeded invariant batteries shared by the test-suite and the selftest command.

Every battery draws its instances from numpy.random.RandomState(seed) and returns a
PropertyResult; a failing instance is kept as the witness.
"""
import numpy as np

from bockstein_quad import P_CHECK_CAP, logger
from bockstein_quad import gf2
from bockstein_quad.bockstein import (
    ModuleFitFailure, NotClosed, QModule, check_P, is_bockstein_closed, module_from_L,
    solve_L,
)
from bockstein_quad.cohomology import (
    CochainComplex, NotACocycle, NotAnExtension, brute_force_agrees, cocycle_to_extension,
    extension_morphisms, extension_to_cocycle, extensions_equivalent, sym_power_module,
)
from bockstein_quad.group import ConsistencyFailure, FiniteTwoGroup, realize_morphism
from bockstein_quad.ideal import QuotientAlgebra
from bockstein_quad.poly import parse_poly, random_poly
from bockstein_quad.quadmap import (
    QuadMapError, QuadMorphism, QuadraticMap, all_maps, family, random_map,
)


class PropertyResult(object):

    def __init__(self, name, instances, failures=0, witness=None):
        self.name = name
        self.instances = instances
        self.failures = failures
        self.witness = witness

    @property
    def passed(self):
        return self.failures == 0

    def fail(self, witness):
        self.failures += 1
        if self.witness is None:
            self.witness = repr(witness)

    def __repr__(self):
        return 'PropertyResult({}, {}/{} failed)'.format(self.name, self.failures,
                                                        self.instances)

    def to_dict(self):
        return {'passed': self.passed, 'instances': self.instances,
                'failures': self.failures, 'witness': self.witness}


def _random_poly(rng, m=None):
    m = m or rng.randint(1, 5)
    degree = rng.randint(0, 4)
    return random_poly(m, degree, rng, density=rng.uniform(0.1, 0.7))


def bockstein_battery(seed=0, instances=1000):
    """beta^2 = 0 and beta(fg) = beta(f) g + f beta(g)."""
    rng = np.random.RandomState(seed)
    result = PropertyResult('bockstein', instances)
    for _ in range(instances):
        m = rng.randint(1, 5)
        f, g = _random_poly(rng, m), _random_poly(rng, m)
        if f.bockstein().bockstein() or (f * g).bockstein() != (
                f.bockstein() * g + f * g.bockstein()):
            result.fail((f, g))
    return result


def solve_battery(seed=0, instances=1000):
    """A x = b for consistent systems, kernel vectors annihilated by A."""
    rng = np.random.RandomState(seed)
    result = PropertyResult('solve_linear', instances)
    for _ in range(instances):
        rows, cols = rng.randint(1, 9), rng.randint(1, 9)
        a = gf2.to_gf2(rng.randint(0, 2, size=(rows, cols)))
        x = gf2.to_gf2(rng.randint(0, 2, size=cols))
        sol = gf2.solve_linear(a, gf2.matmul(a, x))
        ok = (gf2.matmul(a, sol.particular) == gf2.matmul(a, x)).all()
        if len(sol.kernel):
            ok = ok and not gf2.matmul(a, sol.kernel.T).any()
        ok = ok and len(sol.kernel) == cols - gf2.rank(a)
        if not ok:
            result.fail(a.tolist())
    return result


def parse_battery(seed=0, instances=1000):
    """Printed polynomials parse back to themselves."""
    rng = np.random.RandomState(seed)
    result = PropertyResult('parse_print', instances)
    for _ in range(instances):
        f = _random_poly(rng)
        if parse_poly(str(f), f.m) != f:
            result.fail(f)
    return result


def polar_battery(seed=0, instances=1000, cap=12):
    rng = np.random.RandomState(seed)
    result = PropertyResult('polar_identity', instances)
    for _ in range(instances):
        q = random_map(rng.randint(1, 5), rng.randint(1, 4), rng)
        try:
            q.check_polar_identity(cap)
        except QuadMapError:
            result.fail(q)
    return result


def _random_morphism(rng, source, target):
    return QuadMorphism(source, target, rng.randint(0, 2, size=(target.m, source.m)),
                        rng.randint(0, 2, size=(target.n, source.n)))


def morphism_battery(seed=0, instances=1000):
    """The basis check and the polynomial pullback agree on random pairs (f_W, f_V)."""
    rng = np.random.RandomState(seed)
    result = PropertyResult('morphism_pullback', instances)
    for _ in range(instances):
        source = random_map(rng.randint(1, 4), rng.randint(1, 3), rng)
        target = random_map(rng.randint(1, 4), rng.randint(1, 3), rng)
        phi = _random_morphism(rng, source, target)
        if phi.verify() != phi.pullback_check():
            result.fail(phi)
    return result


def p_vs_l_battery(seed=0, instances=500, cap=P_CHECK_CAP):
    """check_P finds P exactly when beta(q) = Lq is solvable.

    Runs over every map with m, n <= 2 and `instances` random maps with m = n = 3.
    """
    rng = np.random.RandomState(seed)
    maps = [q for m in (1, 2) for n in (1, 2) for q in all_maps(m, n)]
    maps += [random_map(3, 3, rng) for _ in range(instances)]
    result = PropertyResult('p_vs_l', len(maps))
    for q in maps:
        if (check_P(q, cap) is not None) != is_bockstein_closed(q):
            result.fail(q)
    return result


def closed_corpus(seed=0, count=20):
    """Bockstein closed maps: the standard examples plus random small closed maps."""
    rng = np.random.RandomState(seed)
    corpus = [QuadraticMap.squares(1), QuadraticMap.squares(2), QuadraticMap.squares(3),
              family('u', 3)]
    tries = 0
    while len(corpus) < count and tries < 50 * count:
        tries += 1
        q = random_map(rng.randint(1, 4), rng.randint(1, 3), rng)
        if is_bockstein_closed(q):
            corpus.append(q)
    return corpus


def _invertible(rng, n):
    while True:
        g = gf2.to_gf2(rng.randint(0, 2, size=(n, n)))
        if gf2.rank(g) == n:
            return g


def derived_closed_map(rng, q, max_m=3):
    """g o Q o f_W for random linear f_W and invertible g; stays Bockstein closed."""
    f_w = rng.randint(0, 2, size=(q.m, rng.randint(1, max_m + 1)))
    return q.precompose(f_w).postcompose(_invertible(rng, q.n))


def _modules(q, sym=True):
    """Trivial, L and Sym^2(L) modules of a closed map; L-modules that do not fit are dropped."""
    out = [QModule.trivial(q)]
    try:
        L = solve_L(q).particular
        out.append(module_from_L(q, L))
        if sym:
            out.append(sym_power_module(q, L, 2))
    except (NotClosed, ModuleFitFailure) as e:
        logger.debug('    -> no L-module for {}: {}'.format(q, e))
    return out


def _complexes(q, max_degree, sym=True):
    algebra = QuotientAlgebra(q.extension_class(), q.m, max_degree)
    return [CochainComplex(q, module, algebra) for module in _modules(q, sym)]


def _random_cochain(rng, cx, p):
    return cx.from_vector(gf2.to_gf2(rng.randint(0, 2, size=cx.dim(p))), p)


def delta_squared_battery(seed=0, instances=1000, max_degree=5, corpus_size=20):
    """delta(delta(c)) = 0 for random cochains c over the trivial, L and Sym^2(L) modules."""
    rng = np.random.RandomState(seed)
    pool = [(cx, p) for q in closed_corpus(seed, corpus_size)
            for cx in _complexes(q, max_degree)
            for p in range(max_degree - 1) if cx.dim(p)]
    result = PropertyResult('delta_squared', instances)
    for _ in range(instances):
        cx, p = pool[rng.randint(len(pool))]
        c = _random_cochain(rng, cx, p)
        if cx.differential(cx.differential(c)):
            result.fail((cx.q, cx.module.name, c))
    return result


def extension_battery(seed=0, instances=1000, max_degree=4, corpus_size=20):
    """Random 2-cocycle -> extension -> cocycle returns the module and an equivalent factor set.

    Draws over the trivial and L-module complexes of the corpus that carry a nonzero cocycle.
    """
    rng = np.random.RandomState(seed)
    pool = []
    for q in closed_corpus(seed, corpus_size):
        for cx in _complexes(q, max_degree, sym=False):
            cocycles = gf2.nullspace(cx.delta_matrix(2)) if cx.dim(2) else gf2.zeros(0, 0)
            if len(cocycles):
                pool.append((cx, cocycles))
    result = PropertyResult('extension_roundtrip', instances)
    for _ in range(instances):
        cx, cocycles = pool[rng.randint(len(pool))]
        coeffs = gf2.to_gf2(rng.randint(0, 2, size=len(cocycles)))
        f = cx.from_vector(gf2.matmul(coeffs, cocycles), 2)
        try:
            ext = cocycle_to_extension(cx, f)
            inc, proj = extension_morphisms(cx.q, ext, cx.k)
            module, f2 = extension_to_cocycle(inc, proj, cx.algebra)
        except (NotACocycle, NotAnExtension, NotClosed) as e:
            result.fail((cx.q, cx.module.name, f, str(e)))
            continue
        if module.R != cx.module.R or extensions_equivalent(f, f2, cx.q, cx.module) is None:
            result.fail((cx.q, cx.module.name, f))
    return result


def random_morphism(rng, max_order=10):
    """A Quad morphism (f_W, g) from Q o f_W to g o Q, both groups of order <= 2^max_order."""
    n = rng.randint(1, max_order // 2 + 1)
    q = random_map(rng.randint(1, max_order - n + 1), n, rng)
    f_w = rng.randint(0, 2, size=(q.m, rng.randint(1, max_order - n + 1)))
    g = rng.randint(0, 2, size=(rng.randint(1, max_order - q.m + 1), n))
    return QuadMorphism(q.precompose(f_w), q.postcompose(g), f_w, g)


def realize_battery(seed=0, instances=1000, max_order=10):
    """Random morphisms between groups of order <= 2^max_order realize as homomorphisms."""
    rng = np.random.RandomState(seed)
    result = PropertyResult('realize', instances)
    for _ in range(instances):
        phi = random_morphism(rng, max_order)
        if not phi.verify():
            result.fail(phi)
            continue
        try:
            hom = realize_morphism(phi, FiniteTwoGroup(phi.source), FiniteTwoGroup(phi.target))
        except ConsistencyFailure as e:
            result.fail((phi, str(e)))
            continue
        # (v, 0) -> (f_V v, 0) and the W-part of the image is f_W w
        v1, w1 = hom.source.split(hom.source.elements())
        v2, w2 = hom.target.split(hom(hom.source.elements()))
        ws = _bits_matmul(w1, phi.f_w, phi.source.m)
        if (w2 != ws).any() or (v2[w1 == 0] != _bits_matmul(v1[w1 == 0], phi.f_v,
                                                              phi.source.n)).any():
            result.fail(phi)
    return result


def _bits_matmul(values, mat, width):
    bits = (values[:, np.newaxis] >> np.arange(width)) & 1
    image = gf2.matmul(bits, np.asarray(mat).T).astype(np.int64)
    return (image << np.arange(image.shape[1])).sum(axis=1)


def brute_force_battery(seed=0, instances=1000, max_degree=4, cap=20, corpus_size=20):
    """Enumerated cocycles modulo coboundaries match the rank computation of H^p.

    Every instance is a fresh closed map derived from the corpus, one of its modules and a
    degree p whose complex fits the cap.
    """
    rng = np.random.RandomState(seed)
    corpus = closed_corpus(seed, corpus_size)
    result = PropertyResult('brute_force', instances)
    for _ in range(instances):
        q = derived_closed_map(rng, corpus[rng.randint(len(corpus))])
        complexes = _complexes(q, max_degree)
        cx = complexes[rng.randint(len(complexes))]
        degrees = [p for p in range(max_degree) if cx.dim(p) + cx.dim(p - 1) <= cap]
        p = degrees[rng.randint(len(degrees))]
        if not brute_force_agrees(cx, p, cap):
            result.fail((q, cx.module.name, p))
    return result


def run_all(seed=0, instances=1000, config=None):
    """Runs every battery with `instances` random instances each.
    Caps are taken from `config` when given.
    """
    polar_cap = getattr(config, 'polar_check_cap', 12)
    p_cap = getattr(config, 'p_check_cap', P_CHECK_CAP)
    brute_cap = getattr(config, 'brute_force_cap', 20)
    batteries = [
        bockstein_battery(seed, instances),
        solve_battery(seed, instances),
        parse_battery(seed, instances),
        polar_battery(seed, instances, polar_cap),
        morphism_battery(seed, instances),
        p_vs_l_battery(seed, instances, p_cap),
        delta_squared_battery(seed, instances),
        extension_battery(seed, instances),
        realize_battery(seed, instances),
        brute_force_battery(seed, instances, cap=brute_cap),
    ]
    for b in batteries:
        logger.info('    -> {}: {} of {} instances failed'.format(
            b.name, b.failures, b.instances))
    return batteries
