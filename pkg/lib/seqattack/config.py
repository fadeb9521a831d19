#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Run configuration.

A run is described by one JSON document. Every command reads the sections
it needs. The whole document is checked against :mod:`seqattack.schema`
up front, so a typo never silently falls back to a default; what is left
here is turning each section into its domain type.
"""

import copy
import json

from seqattack import schema, signals
from seqattack.block import BlockPolicy
from seqattack.frontier import SweepConfig, ExperimentPoint
from seqattack.exception import ConfigError
from seqattack.schema import COMMANDS, MAX_SEED

__all__ = ['COMMANDS', 'RunConfig']


def _source(doc):
    return signals.SourceParams(float(doc['mu_alpha']))


def _strategy(doc, src):
    kind = doc['kind']
    if kind != signals.MED:
        return signals.Strategy(kind)
    if 'lambda_fraction' in doc:
        fraction = float(doc['lambda_fraction'])
        return signals.Strategy.med_fraction(src, fraction)
    return signals.Strategy.med(float(doc['lambda']))


def _policy(doc):
    M = int(doc['M'])
    return BlockPolicy(M, int(doc.get('M_min', M // 2 + 1)), float(doc['q']),
                       float(doc['mu_beta']))


def _floats(values):
    return [float(x) for x in values]


def _sweep(doc, src):
    lambdas = doc.get('lambdas')
    if 'lambda_fractions' in doc:
        lambdas = [signals.lambda_from_fraction(src, float(k))
                   for k in doc['lambda_fractions']]
    q_values = doc.get('q_values')
    return SweepConfig(
            src.mu_alpha, doc.get('strategy', signals.USD),
            None if lambdas is None else _floats(lambdas),
            M_range=tuple(int(x) for x in doc.get('M_range', (3, 41))),
            q_values=None if q_values is None else _floats(q_values),
            mu_beta_range=tuple(_floats(doc.get('mu_beta_range',
                                                (1e-4, 1e2)))),
            resolution=int(doc.get('resolution', 400)),
            dc_cap=doc.get('dc_cap'),
            gain_bands=int(doc.get('gain_bands', 70)),
            gain_range=tuple(_floats(doc.get('gain_range', (1e-14, 1.0)))))


def _verify(doc):
    settings = {}
    if 'M_range' in doc:
        settings['M_range'] = tuple(int(x) for x in doc['M_range'])
    for key in ('q_values', 'mu_beta_values', 'mu_alpha_values',
                'lambda_fractions'):
        if key in doc:
            settings[key] = _floats(doc[key])
    if 'strategies' in doc:
        settings['strategies'] = list(doc['strategies'])
    if 'monte_carlo' in doc:
        settings['monte_carlo'] = [_mc_cell(cell)
                                   for cell in doc['monte_carlo']]
    return settings


def _mc_cell(doc):
    src = _source(doc['source'])
    return {'src': src,
            'strategy': _strategy(doc['strategy'], src),
            'policy': _policy(doc['policy']),
            'n_blocks': int(doc.get('n_blocks', 10**6))}


def _optional(value, kind=float):
    return None if value is None else kind(value)


def _points(doc):
    return [ExperimentPoint(item.get('label', 'point %d' % (ix + 1)),
                            float(item['gain']), float(item['qber']),
                            _optional(item.get('mu_alpha')),
                            _optional(item.get('dc_cap')))
            for ix, item in enumerate(doc)]


class RunConfig(object):
    """A validated run configuration.

    Sections that are absent are None. Use :meth:`require` to check that
    the sections a command needs are present.
    """

    def __init__(self, document=None):
        document = {} if document is None else copy.deepcopy(document)
        schema.check(document)
        self.document = document
        self.command = document.get('command')
        self.source = None
        self.strategy = None
        self.policy = None
        self.sweep = None
        self.n_blocks = None
        self.verify = {}
        self.points = None
        if 'source' in document:
            self.source = _source(document['source'])
        if 'strategy' in document:
            self.strategy = _strategy(document['strategy'], self.source)
        if 'policy' in document:
            self.policy = _policy(document['policy'])
        if 'sweep' in document:
            self.sweep = _sweep(document['sweep'], self.source)
        if 'simulation' in document:
            self.n_blocks = int(document['simulation']['n_blocks'])
        if 'verify' in document:
            self.verify = _verify(document['verify'])
        if 'points' in document:
            self.points = _points(document['points'])
        self.frontier_csv = document.get('frontier_csv')
        self.seed = _optional(document.get('seed'), int)
        self.workers = _optional(document.get('workers'), int)
        output = document.get('output', {})
        self.output_record = output.get('record')
        self.output_csv = output.get('csv')

    @classmethod
    def load(cls, path):
        """Read and validate the JSON configuration at *path*."""
        try:
            with open(path, encoding='utf-8') as fin:
                document = json.load(fin)
        except OSError as e:
            raise ConfigError('cannot read %s: %s' % (path, e.strerror))
        except ValueError as e:
            raise ConfigError('%s: invalid JSON: %s' % (path, e))
        return cls(document)

    @classmethod
    def loads(cls, text):
        try:
            document = json.loads(text)
        except ValueError as e:
            raise ConfigError('invalid JSON: %s' % e)
        return cls(document)

    def override(self, command=None, seed=None, workers=None, record=None,
                 csv=None, frontier_csv=None):
        """Apply command-line values, which win over the document."""
        if command is not None:
            self.command = command
            self.document['command'] = command
        if seed is not None:
            if not 0 <= seed <= MAX_SEED:
                raise ConfigError('seed: must lie in [0, 2^64)')
            self.seed = seed
            self.document['seed'] = seed
        if workers is not None:
            if workers < 1:
                raise ConfigError('workers: must be >= 1 (got %d)' % workers)
            self.workers = workers
        if record is not None:
            self.output_record = record
        if csv is not None:
            self.output_csv = csv
        if frontier_csv is not None:
            self.frontier_csv = frontier_csv
            self.document['frontier_csv'] = frontier_csv

    _required = {
        'evaluate': ('source', 'strategy', 'policy'),
        'frontier': ('source', 'sweep'),
        'simulate': ('source', 'strategy', 'policy', 'n_blocks', 'seed'),
        'verify': (),
        'assess': ('points', 'frontier_csv'),
    }

    def require(self, command=None):
        """Raise :class:`ConfigError` unless every section that *command*
        needs is present."""
        command = command or self.command
        if command is None:
            raise ConfigError('command: missing')
        for name in self._required[command]:
            if getattr(self, name) is None:
                raise ConfigError('%s: required by the %s command'
                                  % (name, command))

    def echo(self):
        """Return the configuration document as given, with command-line
        overrides applied. Worker counts and output paths are left out
        because they do not affect results."""
        document = copy.deepcopy(self.document)
        document.pop('workers', None)
        document.pop('output', None)
        return document
