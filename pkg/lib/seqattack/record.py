#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

import os
import io
import sys
import csv
import json
import math
import datetime

import numpy as np

from seqattack import __version__
from seqattack.block import UNDEFINED
from seqattack.frontier import Frontier, FrontierPoint
from seqattack.exception import InputError
from seqattack.signals import STRATEGIES, MED
from seqattack.util import format_float

__all__ = ['TOOL', 'CSV_HEADER', 'ResultRecord', 'record_timestamp',
           'to_json', 'write_frontier_csv', 'format_frontier_csv',
           'read_frontier_csv']

TOOL = 'seqattack'

CSV_HEADER = ('gain', 'qber', 'dc', 'M', 'M_min', 'q', 'mu_beta', 'lambda',
              'strategy')


def record_timestamp():
    """Return the record creation time as an ISO 8601 UTC string.

    The SOURCE_DATE_EPOCH environment variable, when set, replaces the
    current time.
    """
    epoch = os.environ.get('SOURCE_DATE_EPOCH')
    if epoch:
        when = datetime.datetime.fromtimestamp(int(epoch),
                                               datetime.timezone.utc)
    else:
        when = datetime.datetime.now(datetime.timezone.utc)
    return when.strftime('%Y-%m-%dT%H:%M:%SZ')


def to_json(value):
    """Convert *value* into something :func:`json.dumps` writes as strict
    JSON. The undefined QBER and non-finite floats become strings."""
    if value is UNDEFINED:
        return str(UNDEFINED)
    if hasattr(value, 'as_dict'):
        return to_json(value.as_dict())
    if isinstance(value, dict):
        return dict((str(key), to_json(item)) for key, item in value.items())
    if isinstance(value, (list, tuple)):
        return [to_json(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


class ResultRecord(object):
    """The JSON document that every command writes.

    It echoes the validated input and carries the result, together with the
    tool version, the creation time and the seed. Two runs of the same
    command on the same input produce the same "result" field.
    """

    def __init__(self, command, input, result, seed=None, created=None,
                 version=None):
        self.command = command
        self.input = input
        self.result = result
        self.seed = seed
        self.created = created if created is not None else record_timestamp()
        self.version = version if version is not None else __version__
        # Exit status of the command line tool.
        self.status = 0

    @classmethod
    def evaluate(cls, config, result):
        """Create a record for a single metrics evaluation."""
        return cls('evaluate', config.echo(), result.as_dict())

    @classmethod
    def frontier(cls, config, frontier, csv_path=None):
        """Create a record for a frontier sweep."""
        result = {'points': [p.as_dict() for p in frontier],
                  'diagnostics': frontier.diagnostics, 'csv': csv_path}
        return cls('frontier', config.echo(), result)

    @classmethod
    def simulate(cls, config, estimate):
        return cls('simulate', config.echo(), estimate.as_dict(),
                   seed=estimate.seed)

    @classmethod
    def verify(cls, config, report):
        return cls('verify', config.echo(), report.as_dict(),
                   seed=config.seed)

    @classmethod
    def assess(cls, config, assessments, csv_path):
        result = {'frontier_csv': csv_path,
                  'assessments': [a.as_dict() for a in assessments]}
        return cls('assess', config.echo(), result)

    def as_dict(self):
        return {'tool': TOOL, 'version': self.version,
                'command': self.command, 'created': self.created,
                'seed': self.seed, 'input': to_json(self.input),
                'result': to_json(self.result)}

    def dumps(self):
        return json.dumps(self.as_dict(), indent=2, allow_nan=False) + '\n'

    def write(self, path=None):
        """Write the record to *path*, or to standard output."""
        text = self.dumps()
        if path is None or path == '-':
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        with open(path, 'w', encoding='utf-8', newline='\n') as fout:
            fout.write(text)

    @classmethod
    def load(cls, path):
        with open(path, encoding='utf-8') as fin:
            doc = json.load(fin)
        return cls(doc['command'], doc['input'], doc['result'],
                   doc.get('seed'), doc.get('created'), doc.get('version'))


def _row(point):
    lam = '' if point.lam is None else format_float(point.lam)
    return [format_float(point.gain), format_float(point.qber),
            format_float(point.dc), str(point.M), str(point.M_min),
            format_float(point.q), format_float(point.mu_beta), lam,
            point.strategy]


def format_frontier_csv(frontier):
    """Render *frontier* as CSV text, one row per point in ascending gain."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for point in frontier:
        writer.writerow(_row(point))
    return out.getvalue()


def write_frontier_csv(frontier, path):
    with open(path, 'w', encoding='utf-8', newline='') as fout:
        fout.write(format_frontier_csv(frontier))


def _parse_row(row, lineno):
    if len(row) != len(CSV_HEADER):
        raise InputError('line %d: expected %d fields (got %d)'
                         % (lineno, len(CSV_HEADER), len(row)))
    fields = dict(zip(CSV_HEADER, row))
    try:
        values = dict((name, float(fields[name]))
                      for name in ('gain', 'qber', 'dc', 'q', 'mu_beta'))
        M, M_min = int(fields['M']), int(fields['M_min'])
        lam = float(fields['lambda']) if fields['lambda'] else None
    except ValueError as e:
        raise InputError('line %d: %s' % (lineno, e))
    for name, value in values.items():
        if not math.isfinite(value):
            raise InputError('line %d: %s is not finite' % (lineno, name))
    strategy = fields['strategy']
    if strategy not in STRATEGIES:
        raise InputError('line %d: unknown strategy %r' % (lineno, strategy))
    if (strategy == MED) != (lam is not None):
        raise InputError('line %d: lambda must be given for MED rows only'
                         % lineno)
    return FrontierPoint(values['gain'], values['qber'], values['dc'], M,
                         M_min, values['q'], values['mu_beta'], lam,
                         strategy)


def read_frontier_csv(path):
    """Read a frontier written by :func:`write_frontier_csv`.

    Raises :class:`InputError` naming the offending line when the file is
    malformed or its rows are not sorted by ascending gain.
    """
    try:
        with open(path, 'rb') as fin:
            data = fin.read()
    except OSError as e:
        raise InputError('cannot read frontier %s: %s' % (path, e.strerror))
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as e:
        raise InputError('line %d: not valid UTF-8 (byte 0x%02x)'
                         % (data.count(b'\n', 0, e.start) + 1,
                            data[e.start]))
    try:
        rows = list(csv.reader(io.StringIO(text, newline='')))
    except csv.Error as e:
        raise InputError('%s: %s' % (path, e))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise InputError('line 1: header must be %s' % ','.join(CSV_HEADER))
    points = []
    for lineno, row in enumerate(rows[1:], 2):
        point = _parse_row(row, lineno)
        if points and point.gain < points[-1].gain:
            raise InputError('line %d: rows must be sorted by gain' % lineno)
        points.append(point)
    return Frontier(points)
