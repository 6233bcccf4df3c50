import argparse
import sys
import warnings
from argparse import FileType, RawTextHelpFormatter

import numpy as np
import yaml

from bockstein_quad import (
    BETTI_DEGREE_CAP, BETTI_ORDER_CAP, EFFECTIVE_CAP, GROUP_CAP, MAX_DEGREE, P_CHECK_CAP,
    logger,
)
from bockstein_quad.bockstein import QModule
from bockstein_quad.poly import PolyMatrix, PolySyntaxError, ShapeError, parse_poly
from bockstein_quad.quadmap import FAMILIES, QuadMapError, QuadMorphism, QuadraticMap

__version__ = '0.1'

DESC = """Computes with Bockstein closed quadratic maps Q: W -> V over F_2, the quotient
algebras A*(Q) = F_2[x_1..x_m]/(q_1..q_n), their cohomology with module coefficients, the
B_1 and B_2 pages of the Bockstein spectral sequence and the associated 2-groups G(Q).

Every subcommand except `family` and `selftest` reads a quadratic map from MAP_FILE, or
from stdin when MAP_FILE is omitted, in one of the following (JSON or YAML) forms:

    {"m": 3, "n": 3, "q_polys": ["x1^2", "x1*x2 + x2^2", "x3^2"]}

    {"m": 2, "n": 1, "Q": [[1], [1]], "B": [{"i": 1, "j": 2, "v": [1]}]}

Q lists the values Q(w_i) in F_2^n and B the nonzero polar values B(w_i, w_j), i < j,
both indexed from 1. When both forms are present they must agree. Polynomials use the
grammar  poly := '0' | term ('+' term)*, term := factor ('*' factor)*,
factor := 'x'INDEX ('^'EXP)? | '1'.

The report is written to stdout and a summary of the run to stderr. Exit codes are
0 on success, 1 when the answer is mathematically negative (e.g. not Bockstein closed),
2 on usage or input errors and 3 when a size cap is exceeded.

Pipelines compose, for example

    $ bq family u 3 | bq check
    {"bockstein_closed": true, "regular": true, "two_power_exact": true}
"""


class DataLoaderError(Exception):
    pass


class MapFileReaderError(Exception):
    pass


class ConfigFileReaderError(Exception):
    pass


def _load(f, what):
    """Reads a YAML (or JSON) document from an open file, `f`."""
    with f:
        try:
            data = yaml.safe_load(f.read())
        except yaml.YAMLError as e:
            raise MapFileReaderError('{} file is not valid JSON/YAML.'.format(what)) from e
    if data is None:
        raise MapFileReaderError('{} file is empty.'.format(what))
    return data


def parse_map(data):
    """Builds a QuadraticMap from the decoded exchange schema.
    :raises MapFileReaderError: Indicates invalid map data.
    """
    try:
        return QuadraticMap.from_dict(data)
    except (QuadMapError, PolySyntaxError, ShapeError, TypeError, KeyError, ValueError) as e:
        raise MapFileReaderError('Invalid quadratic map data: {}'.format(e)) from e


def read_map_file(mfile):
    """Loads a quadratic map from an open JSON or YAML file in the format

        {"m": <dim W>, "n": <dim V>, "q_polys": [<poly>, ...]}

    or with the tables "Q" (m rows of n bits) and "B" (entries {"i", "j", "v"}, i < j).

    :param mfile file: open map file.
    :return: the quadratic map.
    :rtype: QuadraticMap.
    :raises MapFileReaderError: Indicates issue reading map file.
    """
    return parse_map(_load(mfile, 'Map'))


def read_module_file(mfile, q):
    """Loads a Q-module {"R": [[<poly>]] (k x k), "T": [[[bit]]] (n x k x k)}.

    An optional "name" labels the module in reports.
    :raises MapFileReaderError: Indicates issue reading module file.
    """
    data = _load(mfile, 'Module')
    try:
        R = PolyMatrix.from_strings(data['R'], q.m)
        T = np.asarray(data.get('T') or np.zeros((q.n, R.rows, R.rows)), dtype=np.int64)
        if T.size == 0:
            T = T.reshape(q.n, R.rows, R.rows)
        return QModule(R, T, name=str(data.get('name', 'file')))
    except (PolySyntaxError, ShapeError, TypeError, KeyError, ValueError) as e:
        raise MapFileReaderError('Invalid module data: {}'.format(e)) from e


def read_eta_file(efile, q):
    """Loads a degree-3 cochain {"eta": [<poly>, ...]} with one entry per coordinate of V."""
    data = _load(efile, 'Eta')
    polys = data.get('eta') if isinstance(data, dict) else data
    try:
        if len(polys) != q.n:
            raise ValueError('eta has {} entries, expected {}'.format(len(polys), q.n))
        return [parse_poly(str(p), q.m) for p in polys]
    except (PolySyntaxError, TypeError, ValueError) as e:
        raise MapFileReaderError('Invalid eta data: {}'.format(e)) from e


def read_morphism_file(mfile):
    """Loads {"source": <map>, "target": <map>, "f_W": [[bit]], "f_V": [[bit]]}.

    f_W is (m2 x m1) and f_V is (n2 x n1); both act on column vectors.
    """
    data = _load(mfile, 'Morphism')
    try:
        source, target = parse_map(data['source']), parse_map(data['target'])
        f_w = np.asarray(data['f_W'], dtype=np.int64).reshape(target.m, source.m)
        f_v = np.asarray(data['f_V'], dtype=np.int64).reshape(target.n, source.n)
        return QuadMorphism(source, target, f_w, f_v)
    except (QuadMapError, TypeError, KeyError, ValueError) as e:
        raise MapFileReaderError('Invalid morphism data: {}'.format(e)) from e


class Config(object):

    """Stores configuration for a run.

    Available configurable settings and default options:

    max_degree          : Truncation degree of A*(Q) and of all graded computations.
                        : Default: 12.
    group_cap           : Largest group order built exhaustively. Default: 65536.
    seed                : Seed of the randomized property batteries. Default: 0.
    output_format       : Report format, 'json' or 'text'. Default: 'json'.
    effective_cap       : Largest m for the exhaustive effectiveness test. Default: 24.
    p_check_cap         : Largest m, n for the bilinear P characterization. Default: 12.
    polar_check_cap     : Largest m for the exhaustive polar identity check. Default: 12.
    betti_order_cap     : Largest group handed to the resolution. Default: 64.
    betti_degree_cap    : Highest Betti number computed. Default: 5.
    realize_dim_cap     : Largest source dimension for realize. Default: 10.
    brute_force_cap     : Largest total cochain dimension enumerated. Default: 20.
    associativity_cap   : Largest 3m for the exhaustive associativity check. Default: 21.
    regularity_bound    : Degree bound of the regularity test, None for m*n+1.
                        : Default: None.
    log_file            : Path of an additional log file. Default: None.
    property_instances  : Randomized instances per property battery. Default: 1000.
    """

    def __init__(self):
        """Sets default configuration options."""
        self.max_degree = MAX_DEGREE
        self.group_cap = GROUP_CAP
        self.seed = 0
        self.output_format = 'json'
        self.effective_cap = EFFECTIVE_CAP
        self.p_check_cap = P_CHECK_CAP
        self.polar_check_cap = 12
        self.betti_order_cap = BETTI_ORDER_CAP
        self.betti_degree_cap = BETTI_DEGREE_CAP
        self.realize_dim_cap = 10
        self.brute_force_cap = 20
        self.associativity_cap = 21
        self.regularity_bound = None
        self.log_file = None
        self.property_instances = 1000


CAP_DEFAULTS = {
    'group_cap': GROUP_CAP, 'betti_order_cap': BETTI_ORDER_CAP,
    'betti_degree_cap': BETTI_DEGREE_CAP, 'effective_cap': EFFECTIVE_CAP,
    'p_check_cap': P_CHECK_CAP,
}


def read_config_file(cfile):
    """Reads optional user configuration from a .yaml file.
    :param cfile file: open .yaml config file, or None.
    :return: object containing config.
    :rtype: Config.
    :raises ConfigFileReaderError: Indicates problem reading config file.
    """
    config = Config()
    if cfile:
        with cfile as f:
            try:
                user_config = yaml.safe_load(f.read()) or {}
            except yaml.YAMLError as e:
                raise ConfigFileReaderError('Config file invalid.') from e
        if not isinstance(user_config, dict):
            raise ConfigFileReaderError('Config file must hold a mapping of options.')
        unsupported = [
            attr for attr in user_config.keys()
            if not hasattr(config, attr)
        ]
        for k in unsupported:
            warnings.warn('Ignored unsupported configuration options: {}'.format(k))
            user_config.pop(k)
        config.__dict__.update(user_config)
        if config.output_format not in ('json', 'text'):
            raise ConfigFileReaderError(
                'output_format must be json or text, got {}'.format(config.output_format))
    return config


def apply_overrides(config, args):
    """Command line flags take precedence over the config file."""
    for key in ('max_degree', 'group_cap', 'seed', 'output_format', 'betti_order_cap',
                'betti_degree_cap'):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    for key, default in CAP_DEFAULTS.items():
        if getattr(config, key) > default:
            warnings.warn('{} raised above its default {} to {}'.format(
                key, default, getattr(config, key)))
    return config


def load_data(args):
    """Handles loading the input map and configuration options.
    :param args argparse.Namespace: parsed command line arguments.
    :return: tuple of the QuadraticMap (None for commands without map input) and Config.
    :rtype: tuple.
    :raises DataLoaderError: Indicates insufficient data provided.
    """
    logger.info('Reading program inputs')
    config = apply_overrides(read_config_file(args.config_file), args)
    if not getattr(args, 'needs_map', True):
        return None, config
    map_file = args.map_file or sys.stdin
    if map_file is sys.stdin and sys.stdin.isatty():
        raise DataLoaderError('No quadratic map given on stdin or as MAP_FILE.')
    return read_map_file(map_file), config


def _positive_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError('expected a non-negative integer, got {}'.format(text))
    return value


def _module_choice(text):
    if text in ('trivial', 'L') or text.startswith('sym:'):
        if text.startswith('sym:'):
            _positive_int(text[4:])
        return text
    return FileType(mode='r')(text)


def get_parser():
    """Creates argument parser for handling command line arguments.
    :return: CLI argument parser.
    :rtype: argparse.ArgumentParser.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '-v', '--verbose', action='store_true', help='output detailed information'
    )
    common.add_argument(
        '-q', '--quiet', action='store_true', help='suppress all log output'
    )
    common.add_argument(
        '-c', '--config-file', type=FileType(mode='r'), required=False, metavar='FILE',
        help='path to yaml config file'
    )
    common.add_argument(
        '--max-degree', type=_positive_int, metavar='N',
        help='truncation degree of graded computations (default 12)'
    )
    common.add_argument(
        '--group-cap', type=_positive_int, metavar='N',
        help='largest group order built exhaustively (default 65536)'
    )
    common.add_argument(
        '--seed', type=_positive_int, metavar='N', help='seed for randomized batteries'
    )
    common.add_argument(
        '--format', dest='output_format', choices=['json', 'text'], help='report format'
    )
    common.add_argument(
        '--betti-order-cap', type=_positive_int, metavar='N',
        help='largest group order resolved (default 64)'
    )
    common.add_argument(
        '--betti-degree-cap', type=_positive_int, metavar='N',
        help='highest resolution degree (default 5)'
    )
    map_arg = argparse.ArgumentParser(add_help=False)
    map_arg.add_argument(
        'map_file', nargs='?', type=FileType(mode='r'), metavar='MAP_FILE',
        help='quadratic map in JSON/YAML (default: stdin)'
    )

    parser = argparse.ArgumentParser(
        prog='bq', description=DESC, formatter_class=RawTextHelpFormatter
    )
    parser.add_argument(
        '-V', '--version', action='version', version=__version__
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    def add(name, help_text, with_map=True):
        parents = [common, map_arg] if with_map else [common]
        p = sub.add_parser(name, help=help_text, parents=parents)
        p.set_defaults(needs_map=with_map)
        return p

    add('check', 'Bockstein closedness, 2-power exactness and regularity')
    add('solve-l', 'solve beta(q) = Lq for a matrix of linear forms')
    add('quotient', 'dimensions and normal-form basis of A*(Q)')
    p = add('cohomology', 'dimensions and representatives of H^p(Q, U)')
    p.add_argument(
        '--module', type=_module_choice, default='trivial', metavar='trivial|L|sym:i|FILE',
        help='coefficient module (default trivial)'
    )
    p.add_argument(
        '--max-p', type=_positive_int, default=3, metavar='P',
        help='highest cohomological degree (default 3)'
    )
    p = add('group', 'build G(Q), verify its structure and report invariants')
    p.add_argument(
        '--table', type=FileType(mode='w'), metavar='FILE',
        help='write the multiplication table, one line "a b ab" per pair'
    )
    p = add('realize', 'realize a morphism of quadratic maps as a group homomorphism',
            with_map=False)
    p.add_argument(
        'morphism_file', type=FileType(mode='r'), metavar='MORPHISM_FILE',
        help='morphism {"source", "target", "f_W", "f_V"} in JSON/YAML'
    )
    p = add('betti', 'Betti numbers of G(Q) against the predicted Poincare series')
    p.add_argument(
        '--degree', type=_positive_int, default=3, metavar='N',
        help='highest Betti number (default 3)'
    )
    for name, help_text in (('b2', 'B1 and B2 pages of the Bockstein spectral sequence'),
                            ('obstruct', 'test whether [eta] vanishes in H^3(Q, L)')):
        p = add(name, help_text)
        p.add_argument(
            '--eta', type=lambda t: t if t == 'zero' else FileType(mode='r')(t),
            default='zero', metavar='FILE|zero', help='degree-3 cochain eta (default zero)'
        )
    p = add('family', 'print a standard map gl n, sl n or u n', with_map=False)
    p.add_argument('kind', choices=FAMILIES, help='matrix family')
    p.add_argument('size', type=_positive_int, help='matrix size n')
    add('selftest', 'run the seeded invariant batteries', with_map=False)
    return parser
