#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Closed-form block statistics of a sequential attack.

Eve cuts her measurement results into blocks of M pulses. Inside a block she
looks for a run of at least M_min consecutive successes and resends coherent
pulses on exactly that run, vacuum everywhere else. A run of exactly M_min
is only resent with probability q. The expected number of clicks, errors
and double clicks that Bob sees per block follows from the run length, the
run position inside the block, and whether the last pulse of the previous
block was coherent.
"""

import math
from collections import namedtuple

import numpy as np

from seqattack import signals
from seqattack.exception import DomainError
from seqattack.util import getLogger, check_probability, check_nonnegative

__all__ = ['UNDEFINED', 'BlockPolicy', 'BoundaryState', 'BlockTerms',
           'AttackMetrics', 'block_terms', 'boundary_prob', 'run_probability',
           'expected_clicks', 'expected_errors_usd', 'expected_errors_med',
           'expected_double_clicks', 'metrics', 'metrics_grid',
           'max_gain_point', 'min_gain_point']

# Powers of p_succ below this value are clamped to zero.
POWER_FLOOR = 1e-300

logger = getLogger(__name__)


class _Undefined(object):
    """The QBER of an attack that produces no clicks."""

    __slots__ = ()

    def __repr__(self):
        return 'UNDEFINED'

    def __str__(self):
        return 'undefined'

    def __bool__(self):
        return False

    def __reduce__(self):
        return 'UNDEFINED'

UNDEFINED = _Undefined()


class BlockPolicy(object):
    """Eve's attack parameters.

    *M* is the block length, *M_min* the shortest run of successes that is
    resent, *q* the probability of resending a run of exactly *M_min*, and
    *mu_beta* the mean photon number of the resent pulses. The lower bound
    floor(M/2 + 1) on *M_min* guarantees that a block holds at most one
    qualifying run.
    """

    def __init__(self, M, M_min, q, mu_beta=0.0):
        if int(M) != M or int(M_min) != M_min:
            raise DomainError('M and M_min must be integers')
        M, M_min = int(M), int(M_min)
        if M < 3:
            raise DomainError('block length M must be >= 3 (got %d)' % M)
        if not M // 2 + 1 <= M_min < M:
            raise DomainError('M_min must lie in [%d, %d) for M=%d (got %d)'
                              % (M // 2 + 1, M, M, M_min))
        self.M = M
        self.M_min = M_min
        self.q = check_probability('q', q)
        self.mu_beta = check_nonnegative('mu_beta', mu_beta)

    @classmethod
    def standard(cls, M, q, mu_beta=0.0):
        """Create a policy with M_min = floor(M/2 + 1)."""
        return cls(M, M // 2 + 1, q, mu_beta)

    def with_mu_beta(self, mu_beta):
        return type(self)(self.M, self.M_min, self.q, mu_beta)

    def __repr__(self):
        return 'BlockPolicy(M=%d, M_min=%d, q=%r, mu_beta=%r)' % \
                (self.M, self.M_min, self.q, self.mu_beta)


BoundaryState = namedtuple('BoundaryState', ('p',))

BlockTerms = namedtuple('BlockTerms', ('u_M', 'v', 'w', 'tilde_u_M',
                                       'tilde_v', 'tilde_w', 'S'))
BlockTerms.__doc__ = """Per-block expected counts behind the closed forms.

*u_M* belongs to a block that is coherent throughout. *v* and *w* map a
partial run length m (M_min <= m < M) to the contribution of a run that
touches a block end and of a run inside the block. The tilde terms are the
matching error counts for MED, and *S* is the coherent/vacuum aggregate that
scales the USD errors and the double clicks.
"""


class AttackMetrics(object):
    """Gain, QBER and double-click rate of an attack.

    The QBER is :data:`UNDEFINED` when the gain is zero. The *underflow* flag
    is set when a power of p_succ was clamped to zero while computing the
    metrics.
    """

    def __init__(self, gain, qber, dc, underflow=False):
        self.gain = gain
        self.qber = qber
        self.dc = dc
        self.underflow = underflow

    @property
    def qber_defined(self):
        return self.qber is not UNDEFINED

    def as_dict(self):
        qber = self.qber if self.qber_defined else str(UNDEFINED)
        return {'gain': self.gain, 'qber': qber, 'dc': self.dc}

    def __iter__(self):
        return iter((self.gain, self.qber, self.dc))

    def __repr__(self):
        return 'AttackMetrics(gain=%r, qber=%r, dc=%r)' % \
                (self.gain, self.qber, self.dc)


class _Powers(object):
    """Powers p_succ^0 .. p_succ^M, clamped to zero below POWER_FLOOR."""

    def __init__(self, p_succ, M):
        self.underflow = False
        self.values = [self._power(p_succ, n) for n in range(M + 1)]

    def _power(self, x, n):
        if n == 0:
            return 1.0
        if x == 0.0:
            return 0.0
        if n > 60:
            value = math.exp(n * math.log(x))
        else:
            value = x ** n
        if value < POWER_FLOOR:
            self.underflow = True
            return 0.0
        return value

    def __getitem__(self, n):
        return self.values[n]


def _boundary(p_succ, policy, powers):
    return (p_succ + (1.0 - p_succ) * policy.q) * powers[policy.M_min]


def _runs(policy, p_succ, powers):
    """Yield (m, weight) for the partial runs M_min <= m < M, where weight
    is q^delta(m, M_min) (1 - p_succ) p_succ^m."""
    for m in range(policy.M_min, policy.M):
        if m == policy.M_min:
            if policy.q == 0.0:
                continue
            yield m, policy.q * (1.0 - p_succ) * powers[m]
        else:
            yield m, (1.0 - p_succ) * powers[m]


def boundary_prob(p_succ, policy):
    """Probability that the last pulse of a block is coherent."""
    p_succ = check_probability('p_succ', p_succ)
    return BoundaryState(_boundary(p_succ, policy, _Powers(p_succ, policy.M)))


def run_probability(m, p_succ, policy):
    """Probability that the block ends in a coherent run of length *m*."""
    if not 0 <= m <= policy.M:
        raise DomainError('run length must lie in [0, %d] (got %r)'
                          % (policy.M, m))
    p_succ = check_probability('p_succ', p_succ)
    powers = _Powers(p_succ, policy.M)
    if m < policy.M_min:
        return 0.0
    elif m == policy.M_min:
        if policy.q == 0.0:
            return 0.0
        return policy.q * (1.0 - p_succ) * powers[m]
    elif m < policy.M:
        return (1.0 - p_succ) * powers[m]
    return powers[policy.M]


def _detection(policy, det):
    if det is None:
        det = signals.detection_probs(policy.mu_beta)
    return det


def _clicks(policy, p_succ, det, powers):
    M = policy.M
    s, t = det.s, det.t
    p = _boundary(p_succ, policy, powers)
    u = (1.0 - 2.0 * p) * t + (M - 1 + p) * s
    total = p * t + powers[M] * u
    for m, weight in _runs(policy, p_succ, powers):
        v = (3.0 - 2.0 * p) * t + (2 * m + p - 2) * s
        w = 2.0 * t + (m - 1) * s
        total = total + weight * (v + (M - m - 1) * (1.0 - p_succ) * w)
    return total


def _aggregate(policy, p_succ, powers):
    # The per-block count of coherent/vacuum transitions, halved.
    M = policy.M
    p = _boundary(p_succ, policy, powers)
    total = p / 2.0 + powers[M] * (0.5 - p)
    for m, weight in _runs(policy, p_succ, powers):
        total += weight * ((1.5 - p) + (M - m - 1) * (1.0 - p_succ))
    return total


def _med_errors(policy, model, det, powers):
    M = policy.M
    p_succ = model.p_succ
    t = det.t
    tilde = signals.pair_error_prob(model, det)
    p = _boundary(p_succ, policy, powers)
    u = (1.0 - 2.0 * p) * t / 2.0 + (M - 1 + p) * tilde
    total = p * t / 2.0 + powers[M] * u
    for m, weight in _runs(policy, p_succ, powers):
        v = (3.0 - 2.0 * p) * t / 2.0 + (2 * m + p - 2) * tilde
        w = t + (m - 1) * tilde
        total = total + weight * (v + (M - m - 1) * (1.0 - p_succ) * w)
    return total


def block_terms(policy, model, det=None):
    """Return the :class:`BlockTerms` of *policy* for the per-signal
    *model*."""
    check_probability('p_succ', model.p_succ)
    det = _detection(policy, det)
    powers = _Powers(model.p_succ, policy.M)
    M = policy.M
    s, t = det.s, det.t
    tilde = signals.pair_error_prob(model, det)
    p = _boundary(model.p_succ, policy, powers)
    v, w, tilde_v, tilde_w = {}, {}, {}, {}
    for m in range(policy.M_min, M):
        v[m] = (3.0 - 2.0 * p) * t + (2 * m + p - 2) * s
        w[m] = 2.0 * t + (m - 1) * s
        tilde_v[m] = (3.0 - 2.0 * p) * t / 2.0 + (2 * m + p - 2) * tilde
        tilde_w[m] = t + (m - 1) * tilde
    return BlockTerms((1.0 - 2.0 * p) * t + (M - 1 + p) * s, v, w,
                      (1.0 - 2.0 * p) * t / 2.0 + (M - 1 + p) * tilde,
                      tilde_v, tilde_w,
                      _aggregate(policy, model.p_succ, powers))


def expected_clicks(policy, p_succ, det=None):
    """Expected number of clicks per block.

    The detection probabilities are computed from ``policy.mu_beta`` unless
    *det* is given, in which case they may hold numpy arrays.
    """
    p_succ = check_probability('p_succ', p_succ)
    det = _detection(policy, det)
    return _clicks(policy, p_succ, det, _Powers(p_succ, policy.M))


def expected_errors_usd(policy, p_succ, det=None):
    """Expected number of errors per block when Eve never misidentifies a
    pulse. Errors only come from coherent/vacuum transitions."""
    p_succ = check_probability('p_succ', p_succ)
    det = _detection(policy, det)
    return det.t * _aggregate(policy, p_succ, _Powers(p_succ, policy.M))


def expected_errors_med(policy, model, det=None):
    """Expected number of errors per block when a successful outcome is
    wrong with probability ``model.p_err``."""
    check_probability('p_succ', model.p_succ)
    det = _detection(policy, det)
    return _med_errors(policy, model, det, _Powers(model.p_succ, policy.M))


def expected_double_clicks(policy, p_succ, det=None):
    """Expected number of double clicks per block, the same for every
    strategy."""
    p_succ = check_probability('p_succ', p_succ)
    det = _detection(policy, det)
    return 2.0 * det.d * _aggregate(policy, p_succ,
                                    _Powers(p_succ, policy.M))


def _block_counts(src, strategy, policy, det):
    model = signals.signal_model(src, strategy)
    powers = _Powers(model.p_succ, policy.M)
    clicks = _clicks(policy, model.p_succ, det, powers)
    if strategy.kind == signals.MED:
        errors = _med_errors(policy, model, det, powers)
    else:
        errors = det.t * _aggregate(policy, model.p_succ, powers)
    doubles = 2.0 * det.d * _aggregate(policy, model.p_succ, powers)
    return clicks, errors, doubles, powers.underflow


def metrics(src, strategy, policy):
    """Return the :class:`AttackMetrics` of *strategy* with *policy*."""
    det = signals.detection_probs(policy.mu_beta)
    clicks, errors, doubles, underflow = \
            _block_counts(src, strategy, policy, det)
    if underflow:
        logger.debug('powers of p_succ clamped to zero for %r', policy)
    M = policy.M
    qber = errors / clicks if clicks > 0.0 else UNDEFINED
    return AttackMetrics(clicks / M, qber, doubles / M, underflow)


def metrics_grid(src, strategy, M, M_min, q, mu_betas):
    """Evaluate the metrics for every mean photon number in *mu_betas*.

    Returns three numpy arrays (gain, qber, dc). The QBER is NaN where the
    gain is zero; callers must filter those entries out.
    """
    policy = BlockPolicy(M, M_min, q)
    det = signals.detection_probs(np.asarray(mu_betas, dtype=float))
    clicks, errors, doubles, _ = _block_counts(src, strategy, policy, det)
    clicks = np.broadcast_to(clicks, det.s.shape)
    errors = np.broadcast_to(errors, det.s.shape)
    with np.errstate(divide='ignore', invalid='ignore'):
        qber = np.where(clicks > 0.0, errors / clicks, np.nan)
    return clicks / M, qber, np.broadcast_to(doubles, det.s.shape) / M


def max_gain_point(p_succ):
    """Limit of the metrics for M = 3, M_min = 2, q = 1 and mu_beta -> inf,
    the largest gain a sequential USD attack can reach."""
    p = check_probability('p_succ', p_succ)
    gain = (6.0 - 2.0 * p - p * p) * p * p / 3.0
    rest = 2.0 - p - p * p
    qber = rest / (6.0 - 2.0 * p - p * p) if gain > 0.0 else UNDEFINED
    return AttackMetrics(gain, qber, 2.0 * rest * p * p / 3.0)


def min_gain_point(p_succ, N):
    """The single-block limit: Eve resends only if all *N* pulses succeed."""
    p = check_probability('p_succ', p_succ)
    if int(N) != N or N < 1:
        raise DomainError('N must be a positive integer (got %r)' % (N,))
    powers = _Powers(p, int(N))
    gain = powers[int(N)]
    qber = 0.0 if gain > 0.0 else UNDEFINED
    return AttackMetrics(gain, qber, 0.0, powers.underflow)
