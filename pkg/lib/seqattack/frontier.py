#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

"""Optimization of Eve's resent intensity and Gain/QBER frontiers.

For every block configuration (M, q, lambda) the mean photon number mu_beta
of the resent pulses is optimized: the QBER is minimized under a cap on the
double-click rate, and optionally with the gain confined to a band. Pooling
the optima of all configurations and keeping the non-dominated ones gives
the frontier of (gain, QBER) pairs that a sequential attack can reproduce.
"""

import bisect
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy import optimize

from seqattack import signals
from seqattack.block import BlockPolicy, metrics, metrics_grid
from seqattack.exception import DomainError, InvariantError, EmptyResultError
from seqattack.util import getLogger, worker_count, check_probability, \
        check_nonnegative

__all__ = ['INSECURE_AGAINST_SEQUENTIAL', 'NOT_EXCLUDED', 'SweepConfig',
           'FrontierPoint', 'OptimizeResult', 'Frontier', 'ExperimentPoint',
           'Assessment', 'optimize_mu_beta', 'build_frontier', 'check_pareto',
           'compare_frontiers', 'assess_point']

INSECURE_AGAINST_SEQUENTIAL = 'INSECURE_AGAINST_SEQUENTIAL'
NOT_EXCLUDED = 'NOT_EXCLUDED'

# QBER values closer than this (relative) are equal; the larger gain wins.
TIE_TOLERANCE = 1e-12

logger = getLogger(__name__)


def _ties(q1, q0):
    return abs(q1 - q0) <= TIE_TOLERANCE * max(abs(q1), abs(q0)) + 1e-300


def _better(candidate, best):
    """Whether AttackMetrics *candidate* beats *best*."""
    if best is None:
        return True
    if _ties(candidate.qber, best.qber):
        return candidate.gain > best.gain
    return candidate.qber < best.qber


def _admits(m, dc_cap, band):
    if not m.qber_defined:
        return False
    if dc_cap is not None and m.dc > dc_cap:
        return False
    if band is not None and not band[0] <= m.gain <= band[1]:
        return False
    return True


class SweepConfig(object):
    """Settings of a frontier sweep.

    The sweep covers every M in *M_range* (inclusive) with M_min =
    floor(M/2 + 1), every q in *q_values* and, for MED, every filter
    strength in *lambdas* (default: the six values of
    :func:`seqattack.signals.default_lambdas`). mu_beta is scanned on
    *resolution* log-spaced points of *mu_beta_range*. *dc_cap* is the
    largest tolerated double-click rate, or None for no cap.

    The gain axis is cut into *gain_bands* log-spaced bands over
    *gain_range*, and mu_beta is optimized separately in each band. With
    zero bands one unconstrained optimization is done per configuration.
    """

    def __init__(self, mu_alpha, strategy=signals.USD, lambdas=None,
                 M_range=(3, 41), q_values=None, mu_beta_range=(1e-4, 1e2),
                 resolution=400, dc_cap=None, gain_bands=70,
                 gain_range=(1e-14, 1.0)):
        self.src = signals.SourceParams(mu_alpha)
        if strategy not in signals.STRATEGIES:
            raise DomainError('strategy must be one of %s (got %r)'
                              % (', '.join(signals.STRATEGIES), strategy))
        self.strategy = strategy
        if strategy == signals.MED:
            if lambdas is None:
                lambdas = signals.default_lambdas(self.src)
            if not lambdas:
                raise DomainError('a MED sweep needs at least one lambda')
            self.lambdas = [float(lam) for lam in lambdas]
        elif lambdas:
            raise DomainError('lambda values are only meaningful for MED')
        else:
            self.lambdas = []
        M_lo, M_hi = M_range
        if int(M_lo) != M_lo or int(M_hi) != M_hi or not 3 <= M_lo <= M_hi:
            raise DomainError('M range must be integers 3 <= lo <= hi '
                              '(got %r)' % (M_range,))
        self.M_range = (int(M_lo), int(M_hi))
        if q_values is None:
            q_values = [k / 10.0 for k in range(11)]
        if not q_values:
            raise DomainError('at least one q value is needed')
        self.q_values = [check_probability('q', q) for q in q_values]
        lo, hi = mu_beta_range
        if not 0.0 < lo < hi or not math.isfinite(hi):
            raise DomainError('mu_beta range must satisfy 0 < lo < hi '
                              '(got %r)' % (mu_beta_range,))
        self.mu_beta_range = (float(lo), float(hi))
        if int(resolution) != resolution or resolution < 3:
            raise DomainError('resolution must be an integer >= 3 (got %r)'
                              % (resolution,))
        self.resolution = int(resolution)
        if dc_cap is not None and not dc_cap >= 0.0:
            raise DomainError('dc_cap must be >= 0 or None (got %r)'
                              % (dc_cap,))
        self.dc_cap = None if dc_cap is None else float(dc_cap)
        if int(gain_bands) != gain_bands or gain_bands < 0:
            raise DomainError('gain_bands must be an integer >= 0 (got %r)'
                              % (gain_bands,))
        self.gain_bands = int(gain_bands)
        lo, hi = gain_range
        if not 0.0 < lo < hi <= 1.0:
            raise DomainError('gain range must satisfy 0 < lo < hi <= 1 '
                              '(got %r)' % (gain_range,))
        self.gain_range = (float(lo), float(hi))

    @property
    def mu_alpha(self):
        return self.src.mu_alpha

    def strategies(self):
        if self.strategy == signals.MED:
            return [signals.Strategy.med(lam) for lam in self.lambdas]
        return [signals.Strategy(self.strategy)]

    def mu_betas(self):
        lo, hi = self.mu_beta_range
        return np.logspace(math.log10(lo), math.log10(hi), self.resolution)

    def bands(self):
        """Return the list of (lo, hi) gain bands, or [None]."""
        if self.gain_bands == 0:
            return [None]
        lo, hi = self.gain_range
        edges = np.logspace(math.log10(lo), math.log10(hi),
                            self.gain_bands + 1)
        edges[-1] = hi
        return [(float(edges[ix]), float(edges[ix+1]))
                for ix in range(self.gain_bands)]

    def cells(self):
        """Return the (M, q, strategy) configurations of the sweep."""
        return [(M, q, strategy)
                for M in range(self.M_range[0], self.M_range[1] + 1)
                for q in self.q_values
                for strategy in self.strategies()]

    def as_dict(self):
        return {'mu_alpha': self.mu_alpha, 'strategy': self.strategy,
                'lambdas': list(self.lambdas), 'M_range': list(self.M_range),
                'q_values': list(self.q_values),
                'mu_beta_range': list(self.mu_beta_range),
                'resolution': self.resolution, 'dc_cap': self.dc_cap,
                'gain_bands': self.gain_bands,
                'gain_range': list(self.gain_range)}


class FrontierPoint(object):
    """One (gain, QBER, double-click rate) operating point together with
    the attack parameters that produce it."""

    def __init__(self, gain, qber, dc, M, M_min, q, mu_beta, lam=None,
                 strategy=signals.USD):
        self.gain = gain
        self.qber = qber
        self.dc = dc
        self.M = M
        self.M_min = M_min
        self.q = q
        self.mu_beta = mu_beta
        self.lam = lam
        self.strategy = strategy

    @classmethod
    def from_metrics(cls, result, policy, strategy):
        return cls(result.gain, result.qber, result.dc, policy.M,
                   policy.M_min, policy.q, policy.mu_beta, strategy.lam,
                   strategy.kind)

    def policy(self):
        return BlockPolicy(self.M, self.M_min, self.q, self.mu_beta)

    def attack_strategy(self):
        return signals.Strategy(self.strategy, self.lam)

    def recompute(self, src):
        """Evaluate the metrics again from the stored parameters."""
        return metrics(src, self.attack_strategy(), self.policy())

    def dominates(self, other):
        return self.gain >= other.gain and self.qber <= other.qber \
                    and (self.gain > other.gain or self.qber < other.qber)

    def as_dict(self):
        return {'gain': self.gain, 'qber': self.qber, 'dc': self.dc,
                'M': self.M, 'M_min': self.M_min, 'q': self.q,
                'mu_beta': self.mu_beta, 'lambda': self.lam,
                'strategy': self.strategy}

    def __repr__(self):
        return 'FrontierPoint(gain=%r, qber=%r, M=%d, q=%r, mu_beta=%r)' % \
                (self.gain, self.qber, self.M, self.q, self.mu_beta)


class OptimizeResult(object):
    """The outcome of :func:`optimize_mu_beta`.

    When no mu_beta satisfies the constraints, *feasible* is False, *reason*
    says why and *mu_beta* and *metrics* are None.
    """

    def __init__(self, mu_beta, metrics, reason=None):
        self.mu_beta = mu_beta
        self.metrics = metrics
        self.reason = reason

    @classmethod
    def infeasible(cls, reason):
        return cls(None, None, reason)

    @property
    def feasible(self):
        return self.metrics is not None

    def __iter__(self):
        return iter((self.mu_beta, self.metrics))

    def __repr__(self):
        if not self.feasible:
            return 'OptimizeResult(infeasible: %s)' % self.reason
        return 'OptimizeResult(mu_beta=%r, %r)' % (self.mu_beta, self.metrics)


class _Scan(object):
    """The metrics of one configuration on the mu_beta grid. The scan is
    shared by all gain bands."""

    def __init__(self, src, strategy, M, M_min, q, mu_betas):
        self.src = src
        self.strategy = strategy
        self.M = M
        self.M_min = M_min
        self.q = q
        self.x = np.log(mu_betas)
        self.gain, self.qber, self.dc = \
                metrics_grid(src, strategy, M, M_min, q, mu_betas)
        self.undefined = int(np.count_nonzero(np.isnan(self.qber)))

    def evaluate(self, x):
        policy = BlockPolicy(self.M, self.M_min, self.q, math.exp(x))
        return metrics(self.src, self.strategy, policy)

    def _feasible(self, dc_cap, band):
        ok = ~np.isnan(self.qber)
        if dc_cap is not None:
            ok &= self.dc <= dc_cap
        if band is not None:
            ok &= (self.gain >= band[0]) & (self.gain <= band[1])
        return ok

    def _settle(self, x, toward, dc_cap, band):
        # A root of a constraint may land a hair on the wrong side.
        for y in (x, x + (toward - x) * 1e-6):
            result = self.evaluate(y)
            if _admits(result, dc_cap, band):
                return y, result
        return None

    def _excess(self, x, dc_cap, band):
        result = self.evaluate(x)
        excess = []
        if band is not None:
            excess.append((result.gain - band[1]) / band[1])
        if dc_cap is not None:
            excess.append((result.dc - dc_cap) / dc_cap if dc_cap > 0.0
                          else result.dc)
        return max(excess)

    def _boundary(self, ix, jx, dc_cap, band):
        """Locate the constraint boundary between grid points ix (feasible)
        and jx (infeasible)."""
        a, b = self.x[ix], self.x[jx]
        if jx < ix:
            if band is None:
                return None
            func = lambda x: self.evaluate(x).gain - band[0]
        else:
            if band is None and dc_cap is None:
                return None
            func = lambda x: self._excess(x, dc_cap, band)
        fa, fb = func(a), func(b)
        if not (fa < 0.0 < fb or fb < 0.0 < fa):
            return None
        root = optimize.brentq(func, min(a, b), max(a, b))
        return self._settle(root, a, dc_cap, band)

    def _interior(self, ix, dc_cap, band):
        lo = self.x[max(ix - 1, 0)]
        hi = self.x[min(ix + 1, len(self.x) - 1)]
        if not lo < hi:
            return None

        def objective(x):
            result = self.evaluate(x)
            return result.qber if _admits(result, dc_cap, band) else math.inf

        found = optimize.minimize_scalar(objective, bounds=(lo, hi),
                                         method='bounded',
                                         options={'xatol': 1e-10})
        result = self.evaluate(found.x)
        if not _admits(result, dc_cap, band):
            return None
        return found.x, result

    def optimize(self, dc_cap=None, band=None):
        ok = self._feasible(dc_cap, band)
        if not ok.any():
            if self.undefined == len(ok):
                reason = 'qber undefined for every mu_beta'
            elif band is not None:
                reason = 'no mu_beta reaches gain in [%g, %g] with dc <= %s' \
                            % (band[0], band[1], dc_cap)
            else:
                reason = 'dc exceeds %s for every mu_beta' % (dc_cap,)
            return OptimizeResult.infeasible(reason)
        qber = np.where(ok, self.qber, np.inf)
        qmin = qber.min()
        ties = ok & (qber <= qmin + TIE_TOLERANCE * abs(qmin) + 1e-300)
        # Largest gain first, then the largest mu_beta among equal gains.
        candidates = np.flatnonzero(ties)[::-1]
        ix = int(candidates[np.argmax(self.gain[candidates])])
        best_x, best = self.x[ix], self.evaluate(self.x[ix])
        if not _admits(best, dc_cap, band):
            best = None
        refined = []
        neighbours = [jx for jx in (ix - 1, ix + 1) if 0 <= jx < len(ok)]
        blocked = [jx for jx in neighbours if not ok[jx]]
        if blocked:
            for jx in blocked:
                refined.append(self._boundary(ix, jx, dc_cap, band))
        else:
            refined.append(self._interior(ix, dc_cap, band))
        for item in refined:
            if item is not None and _better(item[1], best):
                best_x, best = item
        if best is None:
            return OptimizeResult.infeasible('grid optimum fails the '
                                             'constraints when recomputed')
        return OptimizeResult(math.exp(best_x), best)


def optimize_mu_beta(src, strategy, M, q, dc_cap=None, gain_band=None,
                     M_min=None, mu_beta_range=(1e-4, 1e2), resolution=400):
    """Find the mu_beta that minimizes the QBER of one configuration.

    The QBER is minimized subject to D_c <= *dc_cap* (when given) and, when
    *gain_band* is a (lo, hi) pair, lo <= G <= hi. mu_beta is scanned on a
    log grid over *mu_beta_range* and the best grid point is refined once:
    toward the constraint boundary when a grid neighbour is infeasible,
    with a bounded scalar minimization otherwise. QBER ties go to the larger
    gain. Returns an :class:`OptimizeResult`, which is infeasible when no
    mu_beta satisfies the constraints.
    """
    if M_min is None:
        M_min = M // 2 + 1
    lo, hi = mu_beta_range
    if not 0.0 < lo < hi:
        raise DomainError('mu_beta range must satisfy 0 < lo < hi (got %r)'
                          % (mu_beta_range,))
    grid = np.logspace(math.log10(lo), math.log10(hi), int(resolution))
    scan = _Scan(src, strategy, M, M_min, q, grid)
    return scan.optimize(dc_cap, gain_band)


def _evaluate_cell(args):
    cfg, M, q, strategy = args
    log = getLogger(__name__, 'M=%d q=%g lambda=%s' % (M, q, strategy.lam))
    scan = _Scan(cfg.src, strategy, M, M // 2 + 1, q, cfg.mu_betas())
    points = []
    infeasible = 0
    for band in cfg.bands():
        result = scan.optimize(cfg.dc_cap, band)
        if not result.feasible:
            infeasible += 1
            continue
        policy = BlockPolicy(M, M // 2 + 1, q, result.mu_beta)
        points.append(FrontierPoint.from_metrics(result.metrics, policy,
                                                 strategy))
    log.debug('%d candidates, %d infeasible bands', len(points), infeasible)
    return points, infeasible, scan.undefined


def _pareto(points):
    ordered = sorted(points, key=lambda p: (-p.gain, p.qber, p.mu_beta, p.M))
    kept = []
    running = math.inf
    for point in ordered:
        if point.qber < running:
            kept.append(point)
            running = point.qber
    kept.reverse()
    return kept


def check_pareto(points):
    """Raise :class:`InvariantError` unless *points* are sorted by gain and
    no point is dominated by another."""
    gains = np.array([p.gain for p in points], dtype=float)
    qbers = np.array([p.qber for p in points], dtype=float)
    if len(points) > 1 and np.any(np.diff(gains) < 0.0):
        raise InvariantError('frontier is not sorted by gain')
    g_ge = gains[None, :] >= gains[:, None]
    q_le = qbers[None, :] <= qbers[:, None]
    strict = (gains[None, :] > gains[:, None]) \
                | (qbers[None, :] < qbers[:, None])
    dominated = (g_ge & q_le & strict).any(axis=1)
    if dominated.any():
        ix = int(np.flatnonzero(dominated)[0])
        raise InvariantError('frontier point %r is dominated' % points[ix])


class Frontier(object):
    """A Pareto frontier sorted by ascending gain.

    Along the frontier both the gain and the QBER increase strictly. The
    *diagnostics* count the configurations evaluated, the candidate points
    pooled, the infeasible optimizations and the grid points with an
    undefined QBER. *mu_alpha* is the source intensity the frontier was
    computed for, taken from *config* when given; None means unknown.
    """

    def __init__(self, points, diagnostics=None, config=None, mu_alpha=None):
        self.points = list(points)
        self.diagnostics = dict(diagnostics or {})
        self.config = config
        if config is not None:
            mu_alpha = config.mu_alpha
        self.mu_alpha = mu_alpha

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, ix):
        return self.points[ix]

    @property
    def gains(self):
        return [p.gain for p in self.points]

    @property
    def qbers(self):
        return [p.qber for p in self.points]

    @property
    def max_gain(self):
        return self.points[-1].gain if self.points else None

    def within(self, dc_cap):
        """Return the frontier restricted to points with dc <= *dc_cap*."""
        return Frontier([p for p in self.points if p.dc <= dc_cap],
                        mu_alpha=self.mu_alpha)

    def qber_at(self, gain, mode='linear'):
        """Return the frontier QBER at *gain*, or None where the frontier
        does not reach.

        In mode "linear" adjacent points are joined by straight lines and
        gains outside the frontier's range give None. In mode "step" the
        result is the lowest QBER among points with at least *gain*.
        """
        if not self.points:
            return None
        gains = self.gains
        if mode == 'step':
            ix = bisect.bisect_left(gains, gain)
            if ix == len(gains):
                return None
            return self.points[ix].qber
        elif mode != 'linear':
            raise DomainError("mode must be 'linear' or 'step' (got %r)"
                              % (mode,))
        if gain < gains[0] or gain > gains[-1]:
            return None
        return float(np.interp(gain, gains, self.qbers))


def build_frontier(cfg, workers=None):
    """Optimize every configuration of the sweep *cfg* and return the
    :class:`Frontier` of the pooled results.

    Configurations are evaluated in parallel when *workers* > 1; the result
    does not depend on the worker count. A sweep without any feasible point
    yields an empty frontier, with the reason visible in its diagnostics.
    """
    workers = worker_count(workers)
    tasks = [(cfg, M, q, strategy) for M, q, strategy in cfg.cells()]
    logger.info('evaluating %d configurations in %d bands with %d workers',
                len(tasks), len(cfg.bands()), workers)
    if workers == 1:
        results = [_evaluate_cell(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunksize = max(1, len(tasks) // (4 * workers))
            results = list(pool.map(_evaluate_cell, tasks,
                                    chunksize=chunksize))
    candidates = []
    diagnostics = {'cells': len(tasks), 'candidates': 0, 'infeasible': 0,
                   'undefined': 0}
    for points, infeasible, undefined in results:
        candidates.extend(points)
        diagnostics['infeasible'] += infeasible
        diagnostics['undefined'] += undefined
    diagnostics['candidates'] = len(candidates)
    frontier = _pareto(candidates)
    check_pareto(frontier)
    if not frontier:
        logger.warning('no feasible point in the sweep (%d infeasible '
                       'optimizations)', diagnostics['infeasible'])
    diagnostics['points'] = len(frontier)
    return Frontier(frontier, diagnostics, cfg)


def compare_frontiers(first, second, mode='linear'):
    """Evaluate two frontiers at every gain of either of them that lies in
    their common gain range. Returns (gain, qber_first, qber_second)
    triples in ascending gain."""
    if not len(first) or not len(second):
        raise EmptyResultError('cannot compare an empty frontier')
    lo = max(first.gains[0], second.gains[0])
    hi = min(first.max_gain, second.max_gain)
    gains = sorted(set(g for g in first.gains + second.gains
                       if lo <= g <= hi))
    return [(g, first.qber_at(g, mode), second.qber_at(g, mode))
            for g in gains]


class ExperimentPoint(object):
    """A measured operating point of a DPS QKD experiment.

    *mu_alpha* is the intensity the experiment ran at and *dc_cap* the
    largest double-click rate it would tolerate; either may be None.
    """

    def __init__(self, label, gain, qber, mu_alpha=None, dc_cap=None):
        self.label = label
        self.gain = check_probability('gain', gain)
        self.qber = check_probability('qber', qber)
        if mu_alpha is not None:
            mu_alpha = check_nonnegative('mu_alpha', mu_alpha)
        if dc_cap is not None:
            dc_cap = check_nonnegative('dc_cap', dc_cap)
        self.mu_alpha = mu_alpha
        self.dc_cap = dc_cap

    def __repr__(self):
        return 'ExperimentPoint(%r, gain=%r, qber=%r)' % \
                (self.label, self.gain, self.qber)


class Assessment(object):
    """The verdict on one experiment point. *dominating* is a frontier
    point that reproduces the experiment, if one exists; *frontier_qber* is
    the interpolated frontier QBER at the experiment's gain."""

    def __init__(self, point, verdict, dominating=None, frontier_qber=None):
        self.point = point
        self.verdict = verdict
        self.dominating = dominating
        self.frontier_qber = frontier_qber

    @property
    def insecure(self):
        return self.verdict == INSECURE_AGAINST_SEQUENTIAL

    def as_dict(self):
        dominating = self.dominating.as_dict() if self.dominating else None
        return {'label': self.point.label, 'gain': self.point.gain,
                'qber': self.point.qber, 'mu_alpha': self.point.mu_alpha,
                'dc_cap': self.point.dc_cap, 'verdict': self.verdict,
                'dominating': dominating,
                'frontier_qber': self.frontier_qber}


def assess_point(point, frontier):
    """Decide whether a sequential attack can reproduce *point*.

    The point is INSECURE_AGAINST_SEQUENTIAL when a frontier point has at
    least its gain and at most its QBER, or when its QBER is at least the
    linearly interpolated frontier QBER at its gain. Otherwise it is
    NOT_EXCLUDED.

    When the point names a *dc_cap*, only frontier points within that
    double-click rate count. A point whose *mu_alpha* differs from the
    frontier's raises :class:`DomainError`.
    """
    if not len(frontier):
        raise EmptyResultError('cannot assess %r against an empty frontier'
                               % (point.label,))
    if point.mu_alpha is not None and frontier.mu_alpha is not None and \
            not math.isclose(point.mu_alpha, frontier.mu_alpha,
                             rel_tol=1e-12):
        raise DomainError('%s: mu_alpha=%g but the frontier was computed '
                          'for mu_alpha=%g' % (point.label, point.mu_alpha,
                                                frontier.mu_alpha))
    if point.dc_cap is not None:
        frontier = frontier.within(point.dc_cap)
        if not len(frontier):
            logger.info('%s: no frontier point has dc <= %g', point.label,
                        point.dc_cap)
            return Assessment(point, NOT_EXCLUDED)
    interpolated = frontier.qber_at(point.gain, 'linear')
    for candidate in frontier:
        if candidate.gain >= point.gain and candidate.qber <= point.qber:
            return Assessment(point, INSECURE_AGAINST_SEQUENTIAL, candidate,
                              interpolated)
    if interpolated is not None and point.qber >= interpolated:
        return Assessment(point, INSECURE_AGAINST_SEQUENTIAL, None,
                          interpolated)
    return Assessment(point, NOT_EXCLUDED, None, interpolated)
