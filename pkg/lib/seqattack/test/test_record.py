#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

import json
import math

import numpy as np

from seqattack import block, record, signals
from seqattack.block import BlockPolicy, UNDEFINED
from seqattack.config import RunConfig
from seqattack.frontier import Frontier, FrontierPoint
from seqattack.record import ResultRecord, CSV_HEADER
from seqattack.exception import InputError
from seqattack.test import UnitTest, assert_raises

HEADER = ','.join(CSV_HEADER) + '\n'


def toy_frontier():
    points = [FrontierPoint(1e-6, 0.05, 0.0, 10, 6, 0.5, 0.01),
              FrontierPoint(2.5e-5, 0.0812345678901234, 1e-9, 8, 5, 0.5,
                            0.125, 0.75, 'med')]
    return Frontier(points)


class TestCsv(UnitTest):

    need_tmpdir = True

    def write(self, name, text):
        path = self.tempname(name)
        with open(path, 'w', encoding='utf-8') as fout:
            fout.write(text)
        return path

    def test_format(self):
        text = record.format_frontier_csv(toy_frontier())
        lines = text.splitlines()
        assert lines[0] == 'gain,qber,dc,M,M_min,q,mu_beta,lambda,strategy'
        assert lines[1] == '1e-06,0.05,0,10,6,0.5,0.01,,usd'
        assert lines[2] == '2.5e-05,0.0812345678901,1e-09,8,5,0.5,0.125,' \
                           '0.75,med'
        assert text.endswith('\n')

    def test_read_back(self):
        path = self.tempname('frontier.csv')
        record.write_frontier_csv(toy_frontier(), path)
        frontier = record.read_frontier_csv(path)
        assert len(frontier) == 2
        first, second = frontier
        assert first.gain == 1e-6 and first.lam is None
        assert first.strategy == 'usd'
        assert (second.M, second.M_min) == (8, 5)
        assert second.lam == 0.75 and second.strategy == 'med'
        assert math.isclose(second.qber, 0.0812345678901234, rel_tol=1e-11)

    def test_recompute_after_read(self):
        src = signals.SourceParams(0.16)
        policy = BlockPolicy(6, 4, 0.5, 0.3)
        result = block.metrics(src, signals.Strategy.usd(), policy)
        point = FrontierPoint.from_metrics(result, policy,
                                           signals.Strategy.usd())
        path = self.tempname('single.csv')
        record.write_frontier_csv(Frontier([point]), path)
        again = record.read_frontier_csv(path)[0].recompute(src)
        assert math.isclose(again.qber, result.qber, rel_tol=1e-9)
        assert math.isclose(again.gain, result.gain, rel_tol=1e-9)

    def test_empty(self):
        path = self.write('empty.csv', HEADER)
        assert len(record.read_frontier_csv(path)) == 0

    def test_bad_header(self):
        path = self.write('header.csv', 'gain,qber\n')
        e = assert_raises(InputError, record.read_frontier_csv, path)
        assert str(e).startswith('line 1:')

    def test_field_count(self):
        path = self.write('count.csv', HEADER
                          + '1e-06,0.05,0,10,6,0.5,0.01,,usd\n'
                          + '1e-05,0.08,0,8,5,0.5,0.01,usd\n')
        e = assert_raises(InputError, record.read_frontier_csv, path)
        assert str(e).startswith('line 3:')

    def test_bad_values(self):
        rows = ['x,0.05,0,10,6,0.5,0.01,,usd',
                '1e-06,nan,0,10,6,0.5,0.01,,usd',
                '1e-06,0.05,0,10.5,6,0.5,0.01,,usd',
                '1e-06,0.05,0,10,6,0.5,0.01,,intercept',
                '1e-06,0.05,0,10,6,0.5,0.01,0.5,usd',
                '1e-06,0.05,0,10,6,0.5,0.01,,med']
        for ix, row in enumerate(rows):
            path = self.write('bad%d.csv' % ix, HEADER + row + '\n')
            e = assert_raises(InputError, record.read_frontier_csv, path)
            assert str(e).startswith('line 2:')

    def test_not_utf8(self):
        path = self.tempname('latin1.csv')
        with open(path, 'wb') as fout:
            fout.write(HEADER.encode('ascii')
                       + b'1e-06,0.05,0,10,6,0.5,0.01,,usd\n'
                       + b'\xff\xfe,0.1,0,8,5,0.5,0.01,,usd\n')
        e = assert_raises(InputError, record.read_frontier_csv, path)
        assert str(e).startswith('line 3:')
        assert '0xff' in str(e)

    def test_unsorted(self):
        path = self.write('unsorted.csv', HEADER
                          + '1e-05,0.08,0,8,5,0.5,0.01,,usd\n'
                          + '1e-06,0.05,0,10,6,0.5,0.01,,usd\n')
        e = assert_raises(InputError, record.read_frontier_csv, path)
        assert 'line 3' in str(e)
        assert 'sorted' in str(e)

    def test_missing(self):
        assert_raises(InputError, record.read_frontier_csv,
                      self.tempname('does-not-exist.csv'))


class TestJson(UnitTest):

    def test_to_json(self):
        assert record.to_json(UNDEFINED) == 'undefined'
        assert record.to_json(math.inf) == 'inf'
        assert record.to_json(-math.inf) == '-inf'
        assert record.to_json(np.float64(0.5)) == 0.5
        assert type(record.to_json(np.int64(3))) is int
        assert record.to_json(np.bool_(True)) is True
        assert record.to_json({'a': (1, UNDEFINED)}) == {'a': [1, 'undefined']}

    def test_timestamp(self, monkeypatch):
        monkeypatch.setenv('SOURCE_DATE_EPOCH', '0')
        assert record.record_timestamp() == '1970-01-01T00:00:00Z'
        monkeypatch.setenv('SOURCE_DATE_EPOCH', '86400')
        assert record.record_timestamp() == '1970-01-02T00:00:00Z'


class TestResultRecord(UnitTest):

    need_tmpdir = True

    document = {'source': {'mu_alpha': 0.0},
                'strategy': {'kind': 'usd'},
                'policy': {'M': 5, 'q': 0.5, 'mu_beta': 1.0},
                'workers': 2}

    def test_evaluate(self):
        config = RunConfig(self.document)
        result = block.metrics(config.source, config.strategy, config.policy)
        doc = json.loads(ResultRecord.evaluate(config, result).dumps())
        assert doc['tool'] == 'seqattack'
        assert doc['command'] == 'evaluate'
        assert doc['result'] == {'gain': 0.0, 'qber': 'undefined', 'dc': 0.0}
        assert doc['input']['policy']['M'] == 5
        assert 'workers' not in doc['input']
        assert doc['seed'] is None

    def test_write_and_load(self, monkeypatch):
        monkeypatch.setenv('SOURCE_DATE_EPOCH', '0')
        config = RunConfig(self.document)
        result = block.metrics(config.source, config.strategy, config.policy)
        path = self.tempname('record.json')
        ResultRecord.evaluate(config, result).write(path)
        loaded = ResultRecord.load(path)
        assert loaded.command == 'evaluate'
        assert loaded.created == '1970-01-01T00:00:00Z'
        assert loaded.result['qber'] == 'undefined'
        assert loaded.dumps() == self.read(path)
