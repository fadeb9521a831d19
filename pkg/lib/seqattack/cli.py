#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""The ``seqattack`` command line tool.

Exit codes: 0 on success, 1 when verification fails (or on an unexpected
error), 2 for an invalid configuration or input file, 3 when a command
produces or needs a frontier that is empty.
"""

import sys
import logging
import argparse

from seqattack import __version__
from seqattack.block import metrics
from seqattack.config import RunConfig
from seqattack.frontier import build_frontier, assess_point
from seqattack.montecarlo import simulate_chain
from seqattack.record import ResultRecord, write_frontier_csv, \
        read_frontier_csv
from seqattack.verify import VerifySweep, run_verify
from seqattack.exception import ConfigError, InputError, DomainError, \
        EmptyResultError
from seqattack.util import getLogger

__all__ = ['EXIT_OK', 'EXIT_VERIFY_FAILED', 'EXIT_INVALID', 'EXIT_EMPTY',
           'Command', 'main']

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_EMPTY = 3

DEFAULT_CSV = 'frontier.csv'

logger = getLogger(__name__)


class Command(object):
    """A command of the command line tool.

    When this class is used as a decorator on a function, the function
    becomes the handler of the command *name* (default: the function name
    without its ``cmd_`` prefix). The handler takes a :class:`RunConfig` and
    returns a :class:`ResultRecord`.
    """

    registry = {}

    def __init__(self, name=None, help=None, options=None):
        self.name = name
        self.help = help
        self.options = options or []
        self.function = None

    def __str__(self):
        if self.function is None:
            return '<Undecorated Command>'
        return '<Command %s>' % self.name

    def __call__(self, *args, **kwargs):
        """Decorate or call."""
        if self.function is None:
            self.function = args[0]
            if self.name is None:
                name = self.function.__name__
                self.name = name[4:] if name.startswith('cmd_') else name
            if self.help is None and self.function.__doc__:
                self.help = self.function.__doc__.splitlines()[0]
            self.registry[self.name] = self
            return self
        return self.function(*args, **kwargs)


@Command()
def cmd_evaluate(config):
    """Evaluate the closed-form metrics of one attack."""
    result = metrics(config.source, config.strategy, config.policy)
    return ResultRecord.evaluate(config, result)


@Command(options=[(('--csv',), {'help': 'frontier CSV output path'})])
def cmd_frontier(config):
    """Build the Gain/QBER frontier of a sweep."""
    frontier = build_frontier(config.sweep, config.workers)
    if not len(frontier):
        raise EmptyResultError('the sweep has no feasible point (%d '
                               'infeasible optimizations in %d cells)'
                               % (frontier.diagnostics['infeasible'],
                                  frontier.diagnostics['cells']))
    path = config.output_csv or DEFAULT_CSV
    write_frontier_csv(frontier, path)
    return ResultRecord.frontier(config, frontier, path)


@Command()
def cmd_simulate(config):
    """Estimate the metrics of one attack by Monte Carlo simulation."""
    estimate = simulate_chain(config.source, config.strategy, config.policy,
                              config.n_blocks, config.seed, config.workers)
    return ResultRecord.simulate(config, estimate)


@Command()
def cmd_verify(config):
    """Check the closed forms against exact enumeration and simulation."""
    sweep = VerifySweep.from_settings(config.verify)
    report = run_verify(sweep, config.seed, config.workers)
    record = ResultRecord.verify(config, report)
    if not report.passed:
        record.status = EXIT_VERIFY_FAILED
    return record


_FRONTIER_OPTION = (('--frontier',), {'dest': 'frontier_csv',
                                       'help': 'frontier CSV to assess'})


@Command(options=[_FRONTIER_OPTION])
def cmd_assess(config):
    """Assess experimental operating points against a frontier.

    The frontier CSV does not record mu_alpha; a "source" section in the
    configuration supplies it, and points at another mu_alpha are rejected.
    """
    frontier = read_frontier_csv(config.frontier_csv)
    if config.source is not None:
        frontier.mu_alpha = config.source.mu_alpha
    elif any(point.mu_alpha is not None for point in config.points):
        logger.warning('no source section: point mu_alpha values are not '
                       'checked against the frontier')
    assessments = [assess_point(point, frontier) for point in config.points]
    return ResultRecord.assess(config, assessments, config.frontier_csv)


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON run configuration')
    common.add_argument('--out', help='JSON result path (default: stdout)')
    common.add_argument('--seed', type=int, help='random seed')
    common.add_argument('--workers', type=int, help='number of processes')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (repeat for debug output)')
    parser = argparse.ArgumentParser(
            prog='seqattack',
            description='Sequential attacks against DPS QKD.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name, command in Command.registry.items():
        sub = subparsers.add_parser(name, parents=[common], help=command.help)
        for flags, kwargs in command.options:
            sub.add_argument(*flags, **kwargs)
    return parser


def _setup_logging(verbose):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')


def _dispatch(command, args):
    """Run *command* and map its outcome to an exit code."""
    log = getLogger(__name__, 'command %s' % command.name)
    try:
        if args.config:
            config = RunConfig.load(args.config)
        else:
            config = RunConfig()
        config.override(command=command.name, seed=args.seed,
                        workers=args.workers, record=args.out,
                        csv=getattr(args, 'csv', None),
                        frontier_csv=getattr(args, 'frontier_csv', None))
        config.require(command.name)
        record = command(config)
        record.write(config.output_record)
    except (ConfigError, InputError, DomainError) as e:
        sys.stderr.write('seqattack: error: %s\n' % e)
        return EXIT_INVALID
    except EmptyResultError as e:
        sys.stderr.write('seqattack: %s\n' % e)
        return EXIT_EMPTY
    except Exception as e:
        log.error('uncaught exception in command', exc_info=True)
        return EXIT_VERIFY_FAILED
    log.debug('exit status %d', record.status)
    return record.status


def main(argv=None):
    """Entry point of the ``seqattack`` script."""
    args = _parser().parse_args(argv)
    _setup_logging(args.verbose)
    return _dispatch(Command.registry[args.command], args)


if __name__ == '__main__':
    sys.exit(main())
