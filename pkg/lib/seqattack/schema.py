#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""JSON Schema for the run configuration document.

Every object in the document is closed (``additionalProperties: false``)
so that a misspelt key is an error instead of a silent default. Value
ranges that follow from the physics (a negative intensity, an M_min that
is not a majority) are left to the domain types.
"""

import jsonschema

from seqattack import signals
from seqattack.exception import ConfigError

__all__ = ['COMMANDS', 'RUN_CONFIG', 'check']

COMMANDS = ('evaluate', 'frontier', 'simulate', 'verify', 'assess')

MAX_SEED = 2**64 - 1


def _object(properties, required=(), **extra):
    schema = {'type': 'object', 'additionalProperties': False,
              'properties': properties}
    if required:
        schema['required'] = list(required)
    schema.update(extra)
    return schema


_number = {'type': 'number'}
_numbers = {'type': 'array', 'items': _number}
_pair = {'type': 'array', 'items': _number, 'minItems': 2, 'maxItems': 2}
_int_pair = {'type': 'array', 'items': {'type': 'integer'},
             'minItems': 2, 'maxItems': 2}
_probability = {'type': 'number', 'minimum': 0, 'maximum': 1}
_kind = {'enum': list(signals.STRATEGIES)}
_lambda_keys = [{'required': ['lambda']}, {'required': ['lambda_fraction']}]

SOURCE = _object({'mu_alpha': _number}, required=['mu_alpha'])

STRATEGY = _object(
        {'kind': _kind, 'lambda': _number, 'lambda_fraction': _number},
        required=['kind'],
        **{'if': {'properties': {'kind': {'const': signals.MED}}},
           'then': {'oneOf': _lambda_keys,
                    'description': 'med needs exactly one of lambda and '
                                   'lambda_fraction'},
           'else': {'not': {'anyOf': _lambda_keys},
                    'description': 'lambda is only meaningful for med'}})

POLICY = _object({'M': {'type': 'integer'}, 'M_min': {'type': 'integer'},
                  'q': _number, 'mu_beta': _number},
                 required=['M', 'q', 'mu_beta'])

SWEEP = _object(
        {'strategy': _kind, 'lambdas': _numbers, 'lambda_fractions': _numbers,
         'M_range': _int_pair, 'q_values': _numbers, 'mu_beta_range': _pair,
         'resolution': {'type': 'integer'},
         'dc_cap': {'type': ['number', 'null']},
         'gain_bands': {'type': 'integer', 'minimum': 0},
         'gain_range': _pair},
        allOf=[{'not': {'required': ['lambdas', 'lambda_fractions']},
                'description': 'give lambdas or lambda_fractions, not both'}])

MC_CELL = _object({'source': SOURCE, 'strategy': STRATEGY, 'policy': POLICY,
                   'n_blocks': {'type': 'integer', 'minimum': 1}},
                  required=['source', 'strategy', 'policy'])

VERIFY = _object({'M_range': _int_pair, 'q_values': _numbers,
                  'mu_beta_values': _numbers, 'mu_alpha_values': _numbers,
                  'lambda_fractions': _numbers,
                  'strategies': {'type': 'array', 'items': _kind},
                  'monte_carlo': {'type': 'array', 'items': MC_CELL}})

POINT = _object({'label': {'type': 'string'}, 'gain': _probability,
                 'qber': _probability, 'mu_alpha': _number, 'dc_cap': _number},
                required=['gain', 'qber'])

RUN_CONFIG = _object(
        {'command': {'enum': list(COMMANDS)},
         'source': SOURCE,
         'strategy': STRATEGY,
         'policy': POLICY,
         'sweep': SWEEP,
         'simulation': _object({'n_blocks': {'type': 'integer',
                                             'minimum': 1}},
                               required=['n_blocks']),
         'verify': VERIFY,
         'points': {'type': 'array', 'items': POINT},
         'frontier_csv': {'type': 'string'},
         'seed': {'type': 'integer', 'minimum': 0, 'maximum': MAX_SEED},
         'workers': {'type': 'integer', 'minimum': 1},
         'output': _object({'record': {'type': 'string'},
                            'csv': {'type': 'string'}})},
        dependencies={'strategy': ['source'], 'sweep': ['source']})

_validator = jsonschema.Draft7Validator(RUN_CONFIG)


def _where(path):
    """Render a document path as ``sweep.q_values[1]``."""
    where = ''
    for part in path:
        if isinstance(part, int):
            where += '[%d]' % part
        else:
            where += '.%s' % part if where else part
    return where or 'config'


def _message(error):
    where = _where(error.absolute_path)
    if error.validator == 'additionalProperties':
        known = error.schema.get('properties', {})
        extra = sorted(key for key in error.instance if key not in known)
        return '%s.%s: unknown key' % (where, extra[0])
    if error.validator == 'required':
        missing = [key for key in error.validator_value
                   if key not in error.instance]
        return '%s.%s: missing' % (where, missing[0])
    if error.validator == 'dependencies':
        for key, needs in sorted(error.validator_value.items()):
            if key in error.instance:
                absent = [name for name in needs if name not in error.instance]
                if absent:
                    return '%s: needs a %s section' % (key, absent[0])
    return '%s: %s' % (where, error.schema.get('description', error.message))


def check(document):
    """Validate *document* against :data:`RUN_CONFIG`.

    Raises :class:`ConfigError` naming the most relevant violation, with
    its location in dotted form.
    """
    errors = list(_validator.iter_errors(document))
    if not errors:
        return
    error = max(errors, key=jsonschema.exceptions.relevance)
    raise ConfigError(_message(error))
