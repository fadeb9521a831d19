#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

import jsonschema

from seqattack import schema
from seqattack.exception import ConfigError
from seqattack.test import UnitTest, assert_raises


def objects(node):
    """Yield every object schema reachable from *node*."""
    if isinstance(node, dict):
        if node.get('type') == 'object':
            yield node
        for value in node.values():
            yield from objects(value)
    elif isinstance(node, list):
        for value in node:
            yield from objects(value)


class TestSchema(UnitTest):

    def test_well_formed(self):
        jsonschema.Draft7Validator.check_schema(schema.RUN_CONFIG)

    def test_closed(self):
        found = list(objects(schema.RUN_CONFIG))
        assert len(found) >= 9
        for node in found:
            assert node['additionalProperties'] is False

    def test_valid(self):
        schema.check({})
        schema.check({'command': 'frontier', 'source': {'mu_alpha': 0.2},
                      'sweep': {'strategy': 'med', 'lambdas': [0.9, 1],
                                'dc_cap': None},
                      'seed': 0, 'output': {'csv': 'f.csv'}})

    def test_messages(self):
        def message(document):
            return str(assert_raises(ConfigError, schema.check, document))
        assert message({'bogus': 1}) == 'config.bogus: unknown key'
        assert message({'output': {'json': 'x'}}) == \
                'output.json: unknown key'
        assert message({'simulation': {}}) == 'simulation.n_blocks: missing'
        assert message({'sweep': {}}) == 'sweep: needs a source section'
        assert message({'points': [{'gain': 0.1, 'qber': 0.1},
                                   {'gain': 0.1}]}) == \
                'points[1].qber: missing'
        assert message({'source': {'mu_alpha': 0.2},
                        'strategy': {'kind': 'med'}}) == \
                'strategy: med needs exactly one of lambda and ' \
                'lambda_fraction'
        assert message({'source': {'mu_alpha': 0.2},
                        'strategy': {'kind': 'usd', 'lambda': 1}}) == \
                'strategy: lambda is only meaningful for med'
        assert message({'source': {'mu_alpha': 0.2},
                        'sweep': {'lambdas': [1], 'lambda_fractions': [1]}}) \
                == 'sweep: give lambdas or lambda_fractions, not both'
        assert message([]).startswith('config: ')

    def test_nested(self):
        cell = {'source': {'mu_alpha': 0.16}, 'strategy': {'kind': 'usd'},
                'policy': {'M': 5, 'q': 0.5, 'mu_beta': 1, 'mb': 2}}
        e = assert_raises(ConfigError, schema.check,
                          {'verify': {'monte_carlo': [cell]}})
        assert str(e) == 'verify.monte_carlo[0].policy.mb: unknown key'
        e = assert_raises(ConfigError, schema.check,
                          {'verify': {'M_range': [3, 4.5]}})
        assert str(e).startswith('verify.M_range[1]: ')

    def test_seed_range(self):
        schema.check({'seed': schema.MAX_SEED})
        e = assert_raises(ConfigError, schema.check,
                          {'seed': schema.MAX_SEED + 1})
        assert str(e).startswith('seed: ')
        assert_raises(ConfigError, schema.check, {'workers': 0})
