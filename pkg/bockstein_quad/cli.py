#!/usr/bin/env python3

import json
import logging
import sys

from bockstein_quad import CapExceeded, add_log_file, logger
from bockstein_quad.bockstein import (
    ModuleFitFailure, NotClosed, QModule, is_bockstein_closed, module_from_L, solve_L,
)
from bockstein_quad.cohomology import (
    CochainComplex, NotACocycle, ObstructionResult, RepresentationError, obstruction_test,
    sym_power_module,
)
from bockstein_quad.group import (
    ConsistencyFailure, StructureError, build_group, center, frattini, lattice_M,
    realize_morphism, two_rank, verify_structure,
)
from bockstein_quad.ideal import QuotientAlgebra, TruncationError, regularity_report
from bockstein_quad.parse import (
    ConfigFileReaderError, DataLoaderError, MapFileReaderError, get_parser, load_data,
    read_eta_file, read_module_file, read_morphism_file,
)
from bockstein_quad.properties import run_all
from bockstein_quad.poly import Poly
from bockstein_quad.quadmap import QuadMapError, family
from bockstein_quad.resolution import frattini_rank_check, poincare_check
from bockstein_quad.spectral import (
    SSError, b1_page, b2_decomposition, b2_direct, torsion_report,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_CAP = 3

LATTICE_CHECK_CAP = 12


class Negative(Exception):

    """A mathematically negative answer with the report to print."""

    def __init__(self, report):
        super().__init__(report)
        self.report = report


def _algebra(q, config):
    return QuotientAlgebra(q.extension_class(), q.m, config.max_degree)


def _solve_L(q):
    try:
        return solve_L(q)
    except NotClosed as e:
        raise Negative({'bockstein_closed': False}) from e


def cmd_check(q, config, args):
    _solve_L(q)
    reg = regularity_report(q, config.regularity_bound)
    return {
        'bockstein_closed': True,
        'two_power_exact': bool(q.is_two_power_exact(config.effective_cap)),
        'regular': reg['regular'],
    }


def cmd_solve_l(q, config, args):
    return _solve_L(q).to_dict()


def cmd_quotient(q, config, args):
    algebra = _algebra(q, config)
    reg = regularity_report(q, config.regularity_bound)
    return {'dims': algebra.dims, 'regular': reg['regular'],
            'basis': algebra.basis_strings()}


def _module(q, choice):
    if choice == 'trivial':
        return QModule.trivial(q)
    if choice == 'L':
        return module_from_L(q, _solve_L(q).particular)
    if isinstance(choice, str) and choice.startswith('sym:'):
        return sym_power_module(q, _solve_L(q).particular, int(choice[4:]))
    return read_module_file(choice, q)


def cmd_cohomology(q, config, args):
    complex_ = CochainComplex(q, _module(q, args.module), _algebra(q, config))
    top = min(args.max_p, config.max_degree - 1)
    dims, reps = {}, {}
    for p in range(top + 1):
        group = complex_.cohomology(p)
        dims[str(p)] = group.dim
        reps[str(p)] = [c.to_strings() for c in group.representatives]
    return {'module': complex_.module.name, 'dims': dims, 'representatives': reps}


def cmd_group(q, config, args):
    group = build_group(q, config.group_cap)
    structure = verify_structure(group, q, config.associativity_cap, config.seed)
    report = {'order': group.order, 'structure': structure.to_dict()}
    if not structure.ok:
        raise Negative(report)
    phi = frattini(group)
    report.update({
        'abelian': bool(group.is_abelian()),
        'center_order': int(len(center(group))),
        'frattini_order': int(len(phi)),
        'frattini_is_v': bool(len(phi) == 2**q.n and (phi >> q.n == 0).all()),
        'two_rank': two_rank(group),
    })
    report['lattice_multiplicative'] = None
    if q.m <= LATTICE_CHECK_CAP and is_bockstein_closed(q):
        lattice_M(solve_L(q).particular, LATTICE_CHECK_CAP)
        report['lattice_multiplicative'] = True
    if args.table:
        with args.table as fh:
            group.write_table(fh)
    return report


def cmd_realize(q, config, args):
    phi = read_morphism_file(args.morphism_file)
    if not phi.verify():
        raise Negative({'morphism': False})
    g1 = build_group(phi.source, config.group_cap)
    g2 = build_group(phi.target, config.group_cap)
    try:
        hom = realize_morphism(phi, g1, g2, config.realize_dim_cap)
    except ConsistencyFailure as e:
        raise Negative({'morphism': True, 'verified': False, 'error': str(e)}) from e
    return {'morphism': True, 'verified': True, 't': [int(x) for x in hom.t_values],
            'table': [int(x) for x in hom.table]}


def cmd_betti(q, config, args):
    group = build_group(q, config.group_cap)
    report = poincare_check(q, group, args.degree, config.betti_order_cap,
                            config.betti_degree_cap)
    report['frattini_rank'] = frattini_rank_check(q, report['betti'])
    if not report['match']:
        raise Negative(report)
    return report


def _eta(q, choice):
    return None if choice == 'zero' else read_eta_file(choice, q)


def cmd_b2(q, config, args):
    L = _solve_L(q).particular
    eta = _eta(q, args.eta)
    algebra = _algebra(q, config)
    try:
        page = b1_page(q, L, eta, config.max_degree, algebra)
        direct = b2_direct(page)
        decomp = b2_decomposition(q, L, config.max_degree, algebra, eta)
    except SSError as e:
        raise Negative({'bockstein_closed': True, 'error': str(e)}) from e
    return {'B1': page.dims, 'B2_direct': direct.dims, 'B2_decomp': decomp.dims,
            'torsion_ge4_degrees': torsion_report(direct)}


def cmd_obstruct(q, config, args):
    L = _solve_L(q).particular
    eta = _eta(q, args.eta) or [Poly.zero(q.m)] * q.n
    complex_ = CochainComplex(q, module_from_L(q, L), _algebra(q, config))
    report = obstruction_test(complex_, eta).to_dict()
    if report['status'] != ObstructionResult.COBOUNDARY:
        raise Negative(report)
    return report


def cmd_family(q, config, args):
    return family(args.kind, args.size).to_dict()


def cmd_selftest(q, config, args):
    results = run_all(config.seed, config.property_instances, config)
    report = {r.name: r.to_dict() for r in results}
    if not all(r.passed for r in results):
        raise Negative(report)
    return report


COMMANDS = {
    'check': cmd_check,
    'solve-l': cmd_solve_l,
    'quotient': cmd_quotient,
    'cohomology': cmd_cohomology,
    'group': cmd_group,
    'realize': cmd_realize,
    'betti': cmd_betti,
    'b2': cmd_b2,
    'obstruct': cmd_obstruct,
    'family': cmd_family,
    'selftest': cmd_selftest,
}


def write_report(report, fmt, fh):
    """Writes the report as canonical JSON or as sorted 'key: value' lines."""
    if fmt == 'text':
        for key in sorted(report):
            fh.write('{}: {}\n'.format(key, json.dumps(report[key], sort_keys=True)))
    else:
        fh.write(json.dumps(report, sort_keys=True) + '\n')


def _set_verbosity(args):
    if args.quiet:
        logger.setLevel(logging.WARNING)
    elif args.verbose:
        logger.setLevel(logging.DEBUG)
    else:
        logger.setLevel(logging.INFO)


def run(argv=None, out=None):
    """Parses `argv`, runs one subcommand and returns (exit code, report).

    The report is None after usage or input errors. When `out` is given the report is
    written to it in the configured format.
    """
    try:
        args = get_parser().parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else EXIT_USAGE), None
    _set_verbosity(args)
    try:
        q, config = load_data(args)
    except (MapFileReaderError, ConfigFileReaderError, DataLoaderError) as e:
        logger.error(str(e))
        return EXIT_USAGE, None
    if config.log_file:
        add_log_file(config.log_file)
    logger.info('Running {}'.format(args.command))
    try:
        report = COMMANDS[args.command](q, config, args)
        code = EXIT_OK
    except Negative as e:
        report, code = e.report, EXIT_NEGATIVE
    except CapExceeded as e:
        logger.error(str(e))
        report, code = {'error': str(e)}, EXIT_CAP
    except (StructureError, ConsistencyFailure, ModuleFitFailure, NotACocycle) as e:
        logger.error(str(e))
        report, code = {'error': str(e)}, EXIT_NEGATIVE
    except (MapFileReaderError, RepresentationError, QuadMapError, TruncationError) as e:
        logger.error(str(e))
        report, code = {'error': str(e)}, EXIT_USAGE
    if out is not None:
        write_report(report, config.output_format, out)
    logger.info('Finished {} with exit code {}'.format(args.command, code))
    return code, report


def main(argv=None):
    code, _ = run(argv, sys.stdout)
    sys.exit(code)


if __name__ == '__main__':
    main()
