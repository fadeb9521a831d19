#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Per-pulse and per-pair probability primitives.

Alice sends the coherent states ``|alpha>`` and ``|-alpha>``. In the
orthonormal basis {|0>, |1>} of their span these are ``a|0> +- b|1>``, so
every quantity Eve's measurement needs is a closed form in (a, b, lambda).
Bob's one-pulse-delay interferometer is described by three click
probabilities that depend only on the mean photon number Eve resends.
"""

import math
from collections import namedtuple

import numpy as np

from seqattack.exception import DomainError
from seqattack.util import check_nonnegative

__all__ = ['USD', 'MED', 'BOB_DEVICE', 'STRATEGIES', 'LAMBDA_TOLERANCE',
           'SourceParams', 'Strategy', 'BasisCoeffs', 'PerSignalModel',
           'DetectionProbs', 'detection_probs', 'usd_success',
           'bobdevice_success', 'basis_coeffs', 'lambda_bounds',
           'lambda_from_fraction', 'default_lambdas', 'med_filter',
           'filtered_overlap', 'helstrom_error', 'signal_model',
           'pair_error_prob']

USD = 'usd'
MED = 'med'
BOB_DEVICE = 'bob_device'
STRATEGIES = (USD, MED, BOB_DEVICE)

# Absolute tolerance on the endpoints of the filter interval [b/a, 1].
LAMBDA_TOLERANCE = 1e-12


class SourceParams(object):
    """Alice's pulse model: coherent states with mean photon number
    *mu_alpha*."""

    def __init__(self, mu_alpha):
        self.mu_alpha = check_nonnegative('mu_alpha', mu_alpha)

    def __repr__(self):
        return 'SourceParams(mu_alpha=%r)' % self.mu_alpha

    def __eq__(self, other):
        return isinstance(other, SourceParams) \
                    and other.mu_alpha == self.mu_alpha

    def __hash__(self):
        return hash(self.mu_alpha)


class Strategy(object):
    """The measurement Eve performs on every pulse.

    The *kind* is one of :data:`USD`, :data:`MED` or :data:`BOB_DEVICE`.
    The filter strength *lam* must be given for MED, and only for MED. It is
    validated against the source when the strategy is evaluated, because the
    valid interval [b/a, 1] depends on the mean photon number.
    """

    def __init__(self, kind, lam=None):
        if kind not in STRATEGIES:
            raise DomainError('strategy must be one of %s (got %r)'
                              % (', '.join(STRATEGIES), kind))
        if kind == MED and lam is None:
            raise DomainError('a MED strategy needs a filter strength lambda')
        if kind != MED and lam is not None:
            raise DomainError('lambda is only meaningful for MED')
        self.kind = kind
        self.lam = None if lam is None else float(lam)

    @classmethod
    def usd(cls):
        return cls(USD)

    @classmethod
    def med(cls, lam):
        return cls(MED, lam)

    @classmethod
    def bob_device(cls):
        return cls(BOB_DEVICE)

    @classmethod
    def med_fraction(cls, src, fraction):
        """Return a MED strategy with lambda at *fraction* of the way from
        b/a to 1."""
        return cls(MED, lambda_from_fraction(src, fraction))

    def __repr__(self):
        if self.kind == MED:
            return 'Strategy(%r, lam=%r)' % (self.kind, self.lam)
        return 'Strategy(%r)' % self.kind

    def __eq__(self, other):
        return isinstance(other, Strategy) and other.kind == self.kind \
                    and other.lam == self.lam

    def __hash__(self):
        return hash((self.kind, self.lam))


BasisCoeffs = namedtuple('BasisCoeffs', ('a', 'b'))


class PerSignalModel(object):
    """What one of Eve's measurements does to one pulse.

    *p_succ* is the probability that the measurement succeeds, *p_err* the
    probability that a successful outcome names the wrong phase. *contrast*
    is the filtered-state overlap (a^2 lambda^2 - b^2)/(a^2 lambda^2 + b^2);
    it is zero whenever the outcome is error free. *p_fail* is the weight of
    the inconclusive branch, 1 - p_succ. For MED the normalized
    filtered state is available as *filtered_state*, the coefficients of |0>
    and |1> of ``|+alpha_succ>``.
    """

    def __init__(self, p_succ, p_err=0.0, contrast=0.0, filtered_state=None,
                 p_fail=None):
        self.p_succ = p_succ
        self.p_err = p_err
        self.contrast = contrast
        self.filtered_state = filtered_state
        self.p_fail = 1.0 - p_succ if p_fail is None else p_fail

    def __repr__(self):
        return 'PerSignalModel(p_succ=%r, p_err=%r)' % (self.p_succ,
                                                        self.p_err)


DetectionProbs = namedtuple('DetectionProbs', ('s', 't', 'd', 'mu_beta'))
DetectionProbs.__doc__ = """Bob's click probabilities for one slot.

*s* is the click probability of an aligned coherent-coherent pair, *t*
that of a coherent-vacuum pair and *d* the double-click probability of a
coherent-vacuum pair. The fields are floats or, when *mu_beta* is an
array, numpy arrays of the same shape.
"""


def detection_probs(mu_beta):
    """Return the :class:`DetectionProbs` for resent pulses with mean photon
    number *mu_beta*.

    A coherent-coherent pair sends the full intensity to one detector. A
    coherent-vacuum pair sends a quarter of the intensity to each detector.
    *mu_beta* may be a float or a numpy array.
    """
    if np.ndim(mu_beta) == 0:
        mu_beta = check_nonnegative('mu_beta', mu_beta)
        s, t, d, _ = _detection(np.float64(mu_beta))
        return DetectionProbs(float(s), float(t), float(d), mu_beta)
    mu_beta = np.asarray(mu_beta, dtype=float)
    if not np.all(np.isfinite(mu_beta)) or np.any(mu_beta < 0):
        raise DomainError('mu_beta must be finite and >= 0')
    return _detection(mu_beta)


def _detection(mu_beta):
    s = -np.expm1(-mu_beta)
    t = -np.expm1(-mu_beta / 2.0)
    d = np.expm1(-mu_beta / 4.0) ** 2
    return DetectionProbs(s, t, d, mu_beta)


def usd_success(src):
    """Success probability of unambiguous discrimination of |+-alpha>,
    1 - |<alpha|-alpha>| = 1 - exp(-2 mu_alpha)."""
    return -math.expm1(-2.0 * src.mu_alpha)


def bobdevice_success(src):
    """Success probability when Eve uses Bob's own interferometer and
    counts a click as success: 1 - exp(-mu_alpha)."""
    return -math.expm1(-src.mu_alpha)


def basis_coeffs(src):
    """Return the coefficients (a, b) with |+-alpha> = a|0> +- b|1>."""
    overlap = math.exp(-2.0 * src.mu_alpha)
    a = math.sqrt((1.0 + overlap) / 2.0)
    b = math.sqrt(-math.expm1(-2.0 * src.mu_alpha) / 2.0)
    return BasisCoeffs(a, b)


def lambda_bounds(src):
    """Return the valid filter interval (b/a, 1)."""
    a, b = basis_coeffs(src)
    return b / a, 1.0


def lambda_from_fraction(src, fraction):
    """Return b/a + fraction * (1 - b/a)."""
    if not 0.0 <= fraction <= 1.0:
        raise DomainError('lambda fraction must lie in [0, 1] (got %r)'
                          % (fraction,))
    low, high = lambda_bounds(src)
    if fraction == 1.0:
        return high
    return low + fraction * (high - low)


def default_lambdas(src):
    """The six filter strengths b/a + k(1 - b/a)/5, k = 0..5."""
    return [lambda_from_fraction(src, k / 5.0) for k in range(6)]


def _check_lambda(src, lam):
    low, high = lambda_bounds(src)
    if lam < low - LAMBDA_TOLERANCE or lam > high + LAMBDA_TOLERANCE:
        raise DomainError('lambda must lie in [b/a, 1] = [%.15g, 1] for '
                          'mu_alpha=%r (got %r)' % (low, src.mu_alpha, lam))
    return min(max(lam, low), high)


def med_filter(src, lam):
    """Apply the filter A_succ = lambda|0><0| + |1><1| followed by a minimum
    error measurement.

    Returns a :class:`PerSignalModel` with p_succ = a^2 lambda^2 + b^2 and
    p_err = (a lambda - b)^2 / (2 p_succ). At lambda = b/a this is the USD
    measurement; at lambda = 1 the filter is the identity.
    """
    lam = _check_lambda(src, lam)
    a, b = basis_coeffs(src)
    la = lam * a
    # p_succ = a^2 lambda^2 + b^2, written so that lambda = 1 gives exactly 1.
    p_fail = (1.0 - lam * lam) * a * a
    p_succ = 1.0 - p_fail
    if p_succ == 0.0:
        # mu_alpha = 0 and lambda = 0: the filter never lets a pulse through.
        return PerSignalModel(0.0, 0.0, 0.0, None, p_fail=1.0)
    p_err = (la - b) ** 2 / (2.0 * p_succ)
    contrast = (la * la - b * b) / p_succ
    norm = math.sqrt(p_succ)
    return PerSignalModel(p_succ, p_err, contrast, (la / norm, b / norm),
                          p_fail)


def filtered_overlap(src, lam):
    """Return <-alpha_succ|alpha_succ> after the filter."""
    return med_filter(src, lam).contrast


def helstrom_error(overlap):
    """Minimum error probability for two equiprobable pure states with the
    given overlap."""
    return (1.0 - math.sqrt(max(0.0, 1.0 - overlap * overlap))) / 2.0


def signal_model(src, strategy):
    """Return the :class:`PerSignalModel` of *strategy* on *src*."""
    if strategy.kind == USD:
        return PerSignalModel(usd_success(src))
    elif strategy.kind == BOB_DEVICE:
        return PerSignalModel(bobdevice_success(src))
    return med_filter(src, strategy.lam)


def pair_error_prob(model, det):
    """Probability that an aligned-looking coherent-coherent pair produces an
    error at Bob: exactly one of the two pulses was misidentified and Bob
    clicks, 2 p_err (1 - p_err) s = (1/2) contrast^2 s."""
    return 0.5 * model.contrast * model.contrast * det.s
