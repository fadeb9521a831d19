#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Pulse-level model of a sequential attack.

This module rebuilds the block statistics from the bottom up: Eve's dispatch
rule turns a pattern of measurement outcomes into a train of coherent and
vacuum pulses, and Bob's interferometer turns each pair of adjacent pulses
into clicks, errors and double clicks. Summing over every outcome pattern of
a block gives an exact oracle for the closed forms in :mod:`seqattack.block`.
"""

import enum
import math
import itertools
from collections import namedtuple

import numpy as np

from seqattack import signals
from seqattack.block import AttackMetrics, UNDEFINED
from seqattack.exception import DomainError, InvariantError

__all__ = ['PulseKind', 'PairClass', 'Pulse', 'MAX_ENUMERATION_M',
           'dispatch_block', 'dispatch_rows', 'classify_pair',
           'pair_expectations', 'enumerate_boundary', 'enumerate_exact',
           'sample_slots']

# Largest block length that enumerate_exact accepts.
MAX_ENUMERATION_M = 12


class PulseKind(enum.Enum):
    COHERENT = 'coherent'
    VACUUM = 'vacuum'


class PairClass(enum.Enum):
    """The (previous pulse, current pulse) pattern at one interferometer
    slot."""
    CC = 'CC'
    CV = 'CV'
    VC = 'VC'
    VV = 'VV'


Pulse = namedtuple('Pulse', ('kind', 'phase_correct'))


def _qualifying_runs(outcomes, M_min):
    runs = []
    start = None
    for ix, success in enumerate(list(outcomes) + [False]):
        if success and start is None:
            start = ix
        elif not success and start is not None:
            if ix - start >= M_min:
                runs.append((start, ix - start))
            start = None
    return runs


def _send_threshold_run(policy, branch):
    if branch is None:
        if policy.q in (0.0, 1.0):
            return policy.q == 1.0
        raise DomainError('a run of exactly M_min needs a branch selector '
                          'or random source when 0 < q < 1')
    if isinstance(branch, bool):
        return branch
    return branch.random() < policy.q


def dispatch_block(outcomes, policy, branch=None):
    """Return the pulse kinds Eve sends for one block.

    The *outcomes* are M booleans, True for a successful measurement.
    Coherent pulses are sent exactly on the qualifying run of successes, if
    there is one. A run of exactly ``policy.M_min`` is sent when *branch*
    says so: *branch* is either a boolean or an object with a ``random()``
    method from which a uniform number is drawn and compared with
    ``policy.q``.
    """
    if len(outcomes) != policy.M:
        raise DomainError('expected %d outcomes (got %d)'
                          % (policy.M, len(outcomes)))
    kinds = [PulseKind.VACUUM] * policy.M
    runs = _qualifying_runs(outcomes, policy.M_min)
    if not runs:
        return kinds
    if len(runs) > 1:
        raise InvariantError('%d disjoint qualifying runs in one block'
                             % len(runs))
    start, length = runs[0]
    if length == policy.M_min and not _send_threshold_run(policy, branch):
        return kinds
    for ix in range(start, start + length):
        kinds[ix] = PulseKind.COHERENT
    return kinds


def dispatch_rows(outcomes, M_min, send):
    """Vectorized :func:`dispatch_block` over the rows of the boolean matrix
    *outcomes*. The boolean vector *send* selects, per row, whether a run of
    exactly *M_min* is sent. Returns a boolean matrix, True for coherent.
    """
    outcomes = np.asarray(outcomes, dtype=bool)
    n, M = outcomes.shape
    run = np.zeros((n, M), dtype=np.int64)
    run[:, 0] = outcomes[:, 0]
    for ix in range(1, M):
        run[:, ix] = (run[:, ix-1] + 1) * outcomes[:, ix]
    length = run.max(axis=1)
    end = run.argmax(axis=1)
    qualify = (length > M_min) | ((length == M_min) & np.asarray(send))
    pos = np.arange(M)
    return qualify[:, None] & (pos > (end - length)[:, None]) \
                & (pos <= end[:, None])


def classify_pair(prev, cur):
    """Return the :class:`PairClass` of two adjacent pulse kinds."""
    if prev == PulseKind.COHERENT:
        return PairClass.CC if cur == PulseKind.COHERENT else PairClass.CV
    return PairClass.VC if cur == PulseKind.COHERENT else PairClass.VV


def pair_expectations(pair_class, tilde_p_err, det):
    """Expected (clicks, errors, double clicks) at one slot.

    A coherent-coherent pair clicks with probability s and errs with
    *tilde_p_err*. A coherent-vacuum pair splits a quarter of the intensity
    onto each detector: it clicks with probability t, errs with t/2 and
    double clicks with d.
    """
    if pair_class == PairClass.CC:
        return det.s, tilde_p_err, 0.0
    elif pair_class == PairClass.VV:
        return 0.0, 0.0, 0.0
    return det.t, det.t / 2.0, det.d


def _patterns(model, policy):
    """Yield (probability, pulse kinds) for every outcome pattern of one
    block, with the q branch of a threshold run expanded."""
    M = policy.M
    for outcomes in itertools.product((True, False), repeat=M):
        nsucc = sum(outcomes)
        weight = model.p_succ ** nsucc * model.p_fail ** (M - nsucc)
        if weight == 0.0:
            continue
        send = dispatch_block(outcomes, policy, True)
        hold = dispatch_block(outcomes, policy, False)
        if send == hold:
            yield weight, send
            continue
        if policy.q > 0.0:
            yield weight * policy.q, send
        if policy.q < 1.0:
            yield weight * (1.0 - policy.q), hold


def _check_enumerable(policy):
    if policy.M > MAX_ENUMERATION_M:
        raise DomainError('exact enumeration supports M <= %d (got M=%d); '
                          'use simulate_chain for longer blocks'
                          % (MAX_ENUMERATION_M, policy.M))


def enumerate_boundary(p_succ, policy):
    """Probability that the last pulse of a block is coherent, by summing
    over all outcome patterns."""
    _check_enumerable(policy)
    return math.fsum(weight for weight, kinds
                     in _patterns(signals.PerSignalModel(p_succ), policy)
                     if kinds[-1] == PulseKind.COHERENT)


def enumerate_exact(src, strategy, policy):
    """Exact metrics by enumeration of all 2^M outcome patterns.

    Each slot is evaluated from per-pair physics. The previous block's last
    pulse is independent of the current block and is coherent with the
    probability returned by :func:`enumerate_boundary`.
    """
    _check_enumerable(policy)
    model = signals.signal_model(src, strategy)
    det = signals.detection_probs(policy.mu_beta)
    # Bob sees a wrong phase when exactly one of the two pulses was
    # misidentified.
    misaligned = 2.0 * model.p_err * (1.0 - model.p_err)
    expect = dict((cls, pair_expectations(cls, misaligned * det.s, det))
                  for cls in PairClass)
    p_last = 0.0
    p_first = 0.0
    inner = [0.0, 0.0, 0.0]
    for weight, kinds in _patterns(model, policy):
        if kinds[-1] == PulseKind.COHERENT:
            p_last += weight
        if kinds[0] == PulseKind.COHERENT:
            p_first += weight
        for ix in range(1, policy.M):
            values = expect[classify_pair(kinds[ix-1], kinds[ix])]
            for jx in range(3):
                inner[jx] += weight * values[jx]
    totals = []
    for jx in range(3):
        first = p_last * (p_first * expect[PairClass.CC][jx]
                          + (1.0 - p_first) * expect[PairClass.CV][jx]) \
                + (1.0 - p_last) * p_first * expect[PairClass.VC][jx]
        totals.append(inner[jx] + first)
    clicks, errors, doubles = totals
    qber = errors / clicks if clicks > 0.0 else UNDEFINED
    return AttackMetrics(clicks / policy.M, qber, doubles / policy.M)


def sample_slots(prev_coherent, cur_coherent, prev_ok, cur_ok, det, uniforms):
    """Sample Bob's detectors at a batch of slots.

    The pulse arrays are booleans: whether each pulse is coherent and
    whether Eve identified its phase correctly. *uniforms* holds three rows
    of uniform numbers, one column per slot. Returns boolean arrays (click,
    error, double).

    A coherent-coherent pair clicks at one detector with probability s; the
    click is an error when exactly one of the two phases is wrong. At a
    coherent-vacuum pair each detector clicks independently with probability
    1 - exp(-mu_beta/4). A lone click at the wrong detector is an error, and
    a double click is resolved to a random bit.
    """
    prev_coherent = np.asarray(prev_coherent, dtype=bool)
    cur_coherent = np.asarray(cur_coherent, dtype=bool)
    u_first, u_second, u_coin = uniforms
    half = -math.expm1(-det.mu_beta / 4.0)
    both = prev_coherent & cur_coherent
    mixed = prev_coherent ^ cur_coherent
    misaligned = both & (np.asarray(prev_ok) ^ np.asarray(cur_ok))
    aligned_click = both & (u_first < det.s)
    right = mixed & (u_first < half)
    wrong = mixed & (u_second < half)
    double = right & wrong
    click = aligned_click | right | wrong
    error = (aligned_click & misaligned) | (wrong & ~right) \
                | (double & (u_coin < 0.5))
    return click, error, double
