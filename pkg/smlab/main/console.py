"""Contains SMLAB command line interface."""

import argparse
import sys

from ..logger import logger, setup_logger
from ..reader import reader
from ..utils import utils

from .case import ENGINES, EQUIDISTANT, CAUCHY, BR
from .calculus import apply
from .errors import SmlabError, ParameterError
from .experiment import Experiment
from .rbound import SearchConfig, rbound_lower
from .spaces import hoermander_norm, make_partition


def main(argv=None):
    """Run one command and get the process exit code.

    Returns
    -------
    code : int
        0 on success, 1 when some report row did not pass, 2 on errors.
    """
    args = parse_arguments(argv)
    setup_logger(debug=args.debug or None)
    try:
        return args.command(args)
    except SmlabError as error:
        logger.error()
        print(f'{error.__class__.__name__}: {error}', file=sys.stderr)
        return 2


def parse_arguments(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog='smlab', description='Spectral multiplier laboratory.')
    parser.add_argument('--debug', action='store_true', required=False)
    commands = parser.add_subparsers(dest='name', required=True)

    norm = commands.add_parser('norm', help='Hörmander norm of a multiplier')
    norm.add_argument('--func', required=True)
    norm.add_argument('--alpha', type=float, required=True)
    norm.add_argument('--p', type=float, required=True)
    norm.add_argument('--grid', required=False,
                      help='spacing and half-range of the window centres')
    norm.set_defaults(command=run_norm)

    calc = commands.add_parser('calc', help='evaluate f(A) with one engine')
    calc.add_argument('--op', required=True)
    calc.add_argument('--func', required=True)
    calc.add_argument('--engine', choices=ENGINES, required=True)
    calc.add_argument('--sigma', type=float, required=False)
    calc.add_argument('--alpha', type=float, required=False)
    calc.set_defaults(command=run_calc)

    rbound = commands.add_parser('rbound', help='R-bound lower estimate')
    rbound.add_argument('--family', required=True)
    rbound.add_argument('--seed', type=int, required=True)
    rbound.add_argument('--samples', type=int, required=False)
    rbound.add_argument('--tuples', required=False)
    rbound.set_defaults(command=run_rbound)

    experiment = commands.add_parser('experiment', help='run E1..E7')
    experiment.add_argument('experiment')
    experiment.add_argument('--config', required=True)
    experiment.add_argument('--out', required=True)
    experiment.set_defaults(command=run_experiment)
    return parser.parse_args(argv)


def run_norm(args):
    f = reader.read_multiplier(args.func)
    part = make_partition(EQUIDISTANT)
    spacing, s_range = None, None
    if args.grid:
        values = [float(value) for value in args.grid.split(',')]
        if len(values) != 2 or not values[0] > 0 or not values[1] > 0:
            message = f'grid must be "spacing,range", not {args.grid}'
            raise ParameterError(message)
        spacing, s_range = values[0], (-values[1], values[1])
    record = {}
    value = hoermander_norm(f, args.alpha, args.p, part, s_range, spacing,
                            record)
    print(utils.dumps({'norm': value, 'index': record['index'],
                       'shift': record['shift']}))
    return 0


def run_calc(args):
    A = reader.read_operator(args.op)
    f = reader.read_multiplier(args.func)
    options = {}
    if args.sigma is not None:
        if args.engine != CAUCHY:
            raise ParameterError('--sigma applies to the cauchy engine only')
        options['sigma'] = args.sigma
    if args.alpha is not None:
        if args.engine != BR:
            raise ParameterError('--alpha applies to the br engine only')
        options['alpha'] = args.alpha
    result = apply(args.engine, A, f, **options)
    print(utils.dumps(result.to_json()))
    return 0


def run_rbound(args):
    family = reader.read_family(args.family)
    options = {'seed': args.seed}
    if args.samples is not None:
        options['samples'] = args.samples
    if args.tuples:
        options['tuples'] = [int(K) for K in args.tuples.split(',')]
    search = SearchConfig.from_config(options)
    estimate = rbound_lower(family, search)
    output = estimate.to_json()
    output['search'] = {'tuples': list(search.tuples),
                        'restarts': search.restarts,
                        'iterations': search.iterations,
                        'samples': search.samples, 'seed': search.seed}
    print(utils.dumps(output))
    return 0


def run_experiment(args):
    configuration = reader.read_experiment_config(args.config,
                                                  args.experiment.upper())
    configuration['out'] = args.out
    experiment = Experiment(configuration, args.out)
    report = experiment.run()
    statuses = ', '.join(f'{key}={value}'
                         for key, value in sorted(report.statuses.items()))
    print(f'{experiment} {statuses} -> {args.out}')
    return 0 if experiment.passed else 1


if __name__ == '__main__':
    sys.exit(main())
