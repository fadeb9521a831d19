#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

import os
import math
import logging

from seqattack.exception import DomainError

# Environment variable selecting the default worker count.
WORKERS_ENV = 'SEQATTACK_WORKERS'


class ContextLogger(logging.LoggerAdapter):
    """A LoggerAdapter that prepends a message with some context. It allows
    to get good informative log messages without having to write long and
    repetitive logging statements.

    The context is prepended as a "[context message here]" string to the
    actual message.
    """

    def __init__(self, logger, context=None):
        super(ContextLogger, self).__init__(logger, {})
        self.context = context

    def process(self, msg, kwargs):
        if self.logger.getEffectiveLevel() == logging.DEBUG:
            if self.context is not None:
                msg = '[%s] %s' % (self.context, msg)
        return msg, kwargs

    def setContext(self, context):
        self.context = context


def setupLogging():
    """Initialize the logging subsystem."""
    logger = logging.getLogger(__name__.split('.')[0])
    # Avoid one-off "No handlers could be found for logger XXX" error messages
    # in case this library is used in an application that does not configure
    # logging.
    logger.addHandler(logging.NullHandler())


def getLogger(name, context=None):
    """Return a ContextLogger for *name* that adds the information in *context*
    to log messages."""
    logger = logging.getLogger(name)
    adapter = ContextLogger(logger, context)
    return adapter


def check_probability(name, value):
    """Raise a :class:`DomainError` unless *value* lies in [0, 1]."""
    if not 0.0 <= value <= 1.0:
        raise DomainError('%s must lie in [0, 1] (got %r)' % (name, value))
    return float(value)


def check_nonnegative(name, value):
    """Raise a :class:`DomainError` unless *value* is finite and >= 0."""
    if not (value >= 0.0 and math.isfinite(value)):
        raise DomainError('%s must be a finite number >= 0 (got %r)'
                          % (name, value))
    return float(value)


def format_float(value):
    """Render *value* with 12 significant digits, as used in CSV output."""
    return '%.12g' % value


def worker_count(requested=None):
    """Return the number of workers to use.

    An explicit *requested* value wins, then the environment variable named
    by :data:`WORKERS_ENV`, then 1. The worker count never changes results,
    only how fast they are produced.
    """
    if requested is None:
        requested = os.environ.get(WORKERS_ENV)
    if requested is None or requested == '':
        return 1
    try:
        workers = int(requested)
    except (TypeError, ValueError):
        raise DomainError('worker count must be an integer (got %r)'
                          % (requested,))
    if workers < 1:
        raise DomainError('worker count must be >= 1 (got %d)' % workers)
    return workers
