#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

__all__ = ['Error', 'DomainError', 'InvariantError', 'ConfigError',
           'InputError', 'EmptyResultError']


class Error(Exception):
    """Base class for all seqattack errors."""

class DomainError(Error, ValueError):
    """An argument is outside of its valid range."""

class InvariantError(Error):
    """An internal invariant has been violated. This indicates a bug."""

class ConfigError(Error):
    """A run configuration did not pass validation."""

class InputError(Error):
    """An input data file is malformed."""

class EmptyResultError(Error):
    """An operation produced, or was given, an empty result."""
