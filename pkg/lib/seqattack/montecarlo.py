#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Seeded Monte Carlo simulation of a long pulse train.

The train of ``n_blocks * M`` pulses is closed into a ring, so that every
block has a predecessor. It is cut into segments of :data:`SEGMENT_BLOCKS`
blocks, and every segment draws from its own random stream derived from the
seed and the segment index. The slot that joins two segments is sampled from
a separate stream. Results therefore depend on the seed and the number of
blocks, never on the number of workers.
"""

import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from seqattack import signals
from seqattack.block import UNDEFINED
from seqattack.pulses import dispatch_rows, sample_slots
from seqattack.exception import DomainError
from seqattack.util import getLogger, worker_count

__all__ = ['SEGMENT_BLOCKS', 'McEstimate', 'ChainEstimate', 'simulate_chain']

SEGMENT_BLOCKS = 32768

logger = getLogger(__name__)


McEstimate = namedtuple('McEstimate', ('mean', 'stderr', 'n_blocks', 'seed'))


class ChainEstimate(object):
    """Monte Carlo estimates of gain, QBER and double-click rate.

    Each field is a :class:`McEstimate`. The standard errors are computed
    from the per-block counts, which are independent between blocks up to
    the one slot they share.
    """

    def __init__(self, gain, qber, dc, counts):
        self.gain = gain
        self.qber = qber
        self.dc = dc
        self.counts = counts

    @property
    def n_blocks(self):
        return self.gain.n_blocks

    @property
    def seed(self):
        return self.gain.seed

    def as_dict(self):
        result = {}
        for name in ('gain', 'qber', 'dc'):
            estimate = getattr(self, name)
            mean = estimate.mean
            if mean is UNDEFINED:
                mean = str(UNDEFINED)
            result[name] = {'mean': mean, 'stderr': estimate.stderr}
        result['counts'] = dict(self.counts)
        result['n_blocks'] = self.n_blocks
        result['seed'] = self.seed
        return result

    def __repr__(self):
        return 'ChainEstimate(gain=%r, qber=%r, dc=%r)' % \
                (self.gain.mean, self.qber.mean, self.dc.mean)


_Task = namedtuple('_Task', ('index', 'n_blocks', 'seed', 'M', 'M_min', 'q',
                             'p_succ', 'p_err', 'det'))

_Tally = namedtuple('_Tally', ('first', 'last', 'head', 'sums'))

# Order of the entries in _Tally.sums.
_SUM_FIELDS = ('clicks', 'errors', 'doubles', 'clicks_sq', 'errors_sq',
               'doubles_sq', 'clicks_errors')


def _block_sums(clicks, errors, doubles):
    return [int(clicks.sum()), int(errors.sum()), int(doubles.sum()),
            int((clicks * clicks).sum()), int((errors * errors).sum()),
            int((doubles * doubles).sum()), int((clicks * errors).sum())]


def _run_segment(task):
    """Simulate one segment. The first slot of its first block is left for
    the caller, who knows the previous segment's last pulse."""
    rng = np.random.default_rng(
            np.random.SeedSequence(task.seed, spawn_key=(task.index,)))
    n, M = task.n_blocks, task.M
    succ = rng.random((n, M)) < task.p_succ
    correct = rng.random((n, M)) >= task.p_err
    send = rng.random(n) < task.q
    coherent = dispatch_rows(succ, task.M_min, send).ravel()
    correct = correct.ravel()
    uniforms = rng.random((3, n * M - 1))
    click, error, double = sample_slots(coherent[:-1], coherent[1:],
                                        correct[:-1], correct[1:],
                                        task.det, uniforms)
    counts = []
    for values in (click, error, double):
        full = np.zeros(n * M, dtype=np.int64)
        full[1:] = values
        counts.append(full.reshape(n, M).sum(axis=1))
    clicks, errors, doubles = counts
    head = (int(clicks[0]), int(errors[0]), int(doubles[0]))
    sums = _block_sums(clicks[1:], errors[1:], doubles[1:])
    first = (bool(coherent[0]), bool(correct[0]))
    last = (bool(coherent[-1]), bool(correct[-1]))
    return _Tally(first, last, head, sums)


def _join_slot(seed, index, prev, cur, det):
    rng = np.random.default_rng(
            np.random.SeedSequence(seed, spawn_key=(index, 1)))
    uniforms = rng.random((3, 1))
    click, error, double = sample_slots([prev[0]], [cur[0]], [prev[1]],
                                        [cur[1]], det, uniforms)
    return int(click[0]), int(error[0]), int(double[0])


def _variance(total, total_sq, n):
    # Unbiased sample variance of per-block counts, exact in integers.
    return (n * total_sq - total * total) / (n * (n - 1))


def _estimates(sums, n_blocks, seed, M):
    clicks, errors, doubles, clicks_sq, errors_sq, doubles_sq, cross = sums
    n = n_blocks
    if n > 1:
        gain_err = math.sqrt(_variance(clicks, clicks_sq, n) / n) / M
        dc_err = math.sqrt(_variance(doubles, doubles_sq, n) / n) / M
    else:
        gain_err = dc_err = math.inf
    gain = McEstimate(clicks / (n * M), gain_err, n, seed)
    dc = McEstimate(doubles / (n * M), dc_err, n, seed)
    if clicks == 0:
        return gain, McEstimate(UNDEFINED, math.inf, n, seed), dc
    # Ratio estimator: the residuals errors - Q clicks per block, scaled by
    # the mean click count.
    if n > 1:
        residual = clicks * clicks * errors_sq - 2 * errors * clicks * cross \
                    + errors * errors * clicks_sq
        var = residual / (clicks * clicks * (n - 1))
        qber_err = math.sqrt(var * n) / clicks
    else:
        qber_err = math.inf
    qber = McEstimate(errors / clicks, qber_err, n, seed)
    return gain, qber, dc


def _check_count(name, value, minimum):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise DomainError('%s must be an integer >= %d (got %r)'
                          % (name, minimum, value))
    return int(value)


def simulate_chain(src, strategy, policy, n_blocks, seed, workers=None):
    """Simulate *n_blocks* consecutive blocks and estimate the metrics.

    Each estimate carries a standard error, so that a closed-form value can
    be checked to lie within a few standard errors of the simulated one.
    The result is a pure function of the inputs and *seed*; *workers* only
    selects how many processes share the segments.
    """
    n_blocks = _check_count('n_blocks', n_blocks, 1)
    seed = _check_count('seed', seed, 0)
    workers = worker_count(workers)
    model = signals.signal_model(src, strategy)
    det = signals.detection_probs(policy.mu_beta)
    tasks = []
    start = 0
    while start < n_blocks:
        size = min(SEGMENT_BLOCKS, n_blocks - start)
        tasks.append(_Task(len(tasks), size, seed, policy.M, policy.M_min,
                           policy.q, model.p_succ, model.p_err, det))
        start += size
    logger.debug('simulating %d blocks in %d segments with %d workers',
                 n_blocks, len(tasks), workers)
    if workers == 1 or len(tasks) == 1:
        tallies = [_run_segment(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            tallies = list(pool.map(_run_segment, tasks))
    sums = [0] * len(_SUM_FIELDS)
    for index, tally in enumerate(tallies):
        prev = tallies[index-1].last
        joined = _join_slot(seed, index, prev, tally.first, det)
        head = [x + y for x, y in zip(tally.head, joined)]
        block = _block_sums(*(np.array([x], dtype=np.int64) for x in head))
        for ix in range(len(sums)):
            sums[ix] += tally.sums[ix] + block[ix]
    gain, qber, dc = _estimates(sums, n_blocks, seed, policy.M)
    counts = dict(zip(_SUM_FIELDS[:3], sums[:3]))
    return ChainEstimate(gain, qber, dc, counts)
