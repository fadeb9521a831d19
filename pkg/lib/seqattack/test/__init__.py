#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

import os
import json
import shutil
import tempfile

import seqattack


def assert_raises(exc, func, *args, **kwargs):
    """Like pytest.raises but a plain function that returns the exception."""
    try:
        func(*args, **kwargs)
    except Exception as e:
        if isinstance(e, exc):
            return e
        raise
    raise AssertionError('%s not raised' % exc.__name__)


def relerr(a, b):
    """Relative difference of *a* and *b*, 0 when both are 0."""
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


class UnitTest(object):
    """Test infrastructure for seqattack tests."""

    # Set to true if the test writes files
    need_tmpdir = False

    @classmethod
    def setup_class(cls):
        cls.tmpdir = None
        if cls.need_tmpdir:
            cls.tmpdir = tempfile.mkdtemp(prefix='seqattack-test-')

    @classmethod
    def teardown_class(cls):
        if cls.tmpdir is not None:
            shutil.rmtree(cls.tmpdir, ignore_errors=True)
            cls.tmpdir = None

    def tempname(self, name):
        """Return the path of *name* in the class temporary directory."""
        return os.path.join(self.tmpdir, name)

    def write_config(self, name, document):
        """Write *document* as a JSON config file and return its path."""
        path = self.tempname(name)
        with open(path, 'w', encoding='utf-8') as fout:
            json.dump(document, fout)
        return path

    def read(self, path):
        with open(path, encoding='utf-8') as fin:
            return fin.read()
