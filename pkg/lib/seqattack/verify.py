#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Cross-checks of the closed forms against the pulse-level oracles.

Every cell of a parameter sweep is evaluated twice: with the closed forms
of :mod:`seqattack.block` and by exact enumeration of all outcome patterns.
The two must agree to a relative tolerance of 1e-9. A few cells are also
simulated, and the closed form must lie within a few standard errors of
the Monte Carlo estimate.
"""

import math

from seqattack import signals
from seqattack.block import BlockPolicy, UNDEFINED, metrics, boundary_prob
from seqattack.pulses import enumerate_exact, enumerate_boundary
from seqattack.montecarlo import simulate_chain
from seqattack.util import getLogger

__all__ = ['REL_TOL', 'ABS_TOL', 'SIGMAS', 'VerifySweep', 'CellCheck',
           'VerifyReport', 'check_analytic', 'check_monte_carlo',
           'run_verify']

REL_TOL = 1e-9
ABS_TOL = 1e-15
SIGMAS = 4.0

logger = getLogger(__name__)


def _default_mc_cells():
    return [{'src': signals.SourceParams(0.16),
             'strategy': signals.Strategy.usd(),
             'policy': BlockPolicy(5, 3, 0.5, 0.8),
             'n_blocks': 10**6}]


class VerifySweep(object):
    """The cells to verify.

    The analytic sweep is the product of *mu_alpha_values*, the strategies
    (MED once per entry of *lambda_fractions*), every M in *M_range* with
    every valid M_min, *q_values* and *mu_beta_values*. *monte_carlo* is a
    list of dicts with keys src, strategy, policy and n_blocks.
    """

    def __init__(self, M_range=(3, 8), q_values=(0.0, 0.3, 1.0),
                 mu_beta_values=(0.1, 1.0, 10.0),
                 mu_alpha_values=(0.16, 0.2),
                 strategies=signals.STRATEGIES,
                 lambda_fractions=(0.0, 0.5, 1.0), monte_carlo=None):
        self.M_range = tuple(M_range)
        self.q_values = list(q_values)
        self.mu_beta_values = list(mu_beta_values)
        self.mu_alpha_values = list(mu_alpha_values)
        self.strategies = list(strategies)
        self.lambda_fractions = list(lambda_fractions)
        if monte_carlo is None:
            monte_carlo = _default_mc_cells()
        self.monte_carlo = list(monte_carlo)

    @classmethod
    def from_settings(cls, settings):
        """Create a sweep from the validated "verify" config section."""
        return cls(**settings)

    def _strategies(self, src):
        result = []
        for kind in self.strategies:
            if kind == signals.MED:
                result.extend(signals.Strategy.med_fraction(src, k)
                              for k in self.lambda_fractions)
            else:
                result.append(signals.Strategy(kind))
        return result

    def analytic_cells(self):
        """Yield (src, strategy, policy) triples."""
        for mu_alpha in self.mu_alpha_values:
            src = signals.SourceParams(mu_alpha)
            for strategy in self._strategies(src):
                for M in range(self.M_range[0], self.M_range[1] + 1):
                    for M_min in range(M // 2 + 1, M):
                        for q in self.q_values:
                            for mu_beta in self.mu_beta_values:
                                yield src, strategy, \
                                        BlockPolicy(M, M_min, q, mu_beta)


class CellCheck(object):
    """The outcome of checking one cell."""

    def __init__(self, kind, src, strategy, policy, passed, expected,
                 observed, detail=None):
        self.kind = kind
        self.src = src
        self.strategy = strategy
        self.policy = policy
        self.passed = passed
        self.expected = expected
        self.observed = observed
        self.detail = detail

    @property
    def label(self):
        lam = '' if self.strategy.lam is None else \
                ' lambda=%.6g' % self.strategy.lam
        return '%s mu_alpha=%g %s%s M=%d M_min=%d q=%g mu_beta=%g' % \
                (self.kind, self.src.mu_alpha, self.strategy.kind, lam,
                 self.policy.M, self.policy.M_min, self.policy.q,
                 self.policy.mu_beta)

    def as_dict(self):
        return {'cell': self.label, 'passed': self.passed,
                'expected': self.expected, 'observed': self.observed,
                'detail': self.detail}


def _close(a, b, rel_tol=REL_TOL):
    if a is UNDEFINED or b is UNDEFINED:
        return a is b
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=ABS_TOL)


def check_analytic(src, strategy, policy):
    """Compare the closed form with exact enumeration for one cell."""
    expected = metrics(src, strategy, policy)
    observed = enumerate_exact(src, strategy, policy)
    failed = [name for name, a, b in zip(('gain', 'qber', 'dc'), expected,
                                         observed) if not _close(a, b)]
    p_succ = signals.signal_model(src, strategy).p_succ
    closed = boundary_prob(p_succ, policy).p
    enumerated = enumerate_boundary(p_succ, policy)
    if not _close(closed, enumerated, 1e-12):
        failed.append('boundary')
    detail = 'mismatch in %s' % ', '.join(failed) if failed else None
    return CellCheck('exact', src, strategy, policy, not failed,
                     expected.as_dict(), observed.as_dict(), detail)


def check_monte_carlo(src, strategy, policy, n_blocks, seed, workers=None):
    """Compare the closed form with a simulation for one cell."""
    expected = metrics(src, strategy, policy)
    estimate = simulate_chain(src, strategy, policy, n_blocks, seed, workers)
    failed = []
    for name, value in zip(('gain', 'qber', 'dc'), expected):
        found = getattr(estimate, name)
        if value is UNDEFINED or found.mean is UNDEFINED:
            if value is not found.mean:
                failed.append(name)
            continue
        if abs(found.mean - value) > SIGMAS * found.stderr + ABS_TOL:
            failed.append(name)
    detail = 'outside %g standard errors in %s' % (SIGMAS, ', '.join(failed)) \
                if failed else None
    return CellCheck('monte_carlo', src, strategy, policy, not failed,
                     expected.as_dict(), estimate.as_dict(), detail)


class VerifyReport(object):
    """All cell checks of a verification run."""

    def __init__(self, checks):
        self.checks = list(checks)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]

    def count(self, kind):
        return sum(1 for check in self.checks if check.kind == kind)

    def as_dict(self):
        return {'passed': self.passed,
                'exact_cells': self.count('exact'),
                'monte_carlo_cells': self.count('monte_carlo'),
                'failures': len(self.failures),
                'cells': [check.as_dict() for check in self.checks]}


def run_verify(sweep=None, seed=None, workers=None):
    """Run every check of *sweep* and return a :class:`VerifyReport`."""
    if sweep is None:
        sweep = VerifySweep()
    if seed is None:
        seed = 1
    log = getLogger(__name__)
    checks = []

    def record(check):
        log.setContext(check.label)
        if check.passed:
            log.debug('passed')
        else:
            log.warning('%s: %s', check.label, check.detail)
        checks.append(check)

    for src, strategy, policy in sweep.analytic_cells():
        record(check_analytic(src, strategy, policy))
    for cell in sweep.monte_carlo:
        record(check_monte_carlo(cell['src'], cell['strategy'],
                                 cell['policy'], cell['n_blocks'], seed,
                                 workers))
    report = VerifyReport(checks)
    logger.info('%d cells checked, %d failures', len(checks),
                len(report.failures))
    return report
