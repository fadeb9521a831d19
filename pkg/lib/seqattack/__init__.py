#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

__version__ = '0.9'

from seqattack.exception import *
from seqattack.signals import *
from seqattack.block import *
from seqattack.pulses import *
from seqattack.montecarlo import *
from seqattack.frontier import *
from seqattack.record import ResultRecord, read_frontier_csv, \
        write_frontier_csv
from seqattack.config import RunConfig
from seqattack.verify import VerifySweep, run_verify

from seqattack.util import setupLogging
setupLogging()
