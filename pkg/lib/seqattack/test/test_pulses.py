#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS"
# for a complete list.

import math
import random
import itertools
from types import SimpleNamespace

import numpy as np

from seqattack import block, pulses, signals
from seqattack.block import BlockPolicy, UNDEFINED
from seqattack.pulses import PulseKind, PairClass
from seqattack.exception import DomainError, InvariantError
from seqattack.test import UnitTest, assert_raises

C = PulseKind.COHERENT
V = PulseKind.VACUUM


def outcomes(pattern):
    return [c == 'S' for c in pattern]


def close(a, b, rel_tol=1e-9):
    if a is UNDEFINED or b is UNDEFINED:
        return a is b
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=1e-15)


def binomial_ok(count, n, p):
    sigma = math.sqrt(p * (1 - p) / n)
    return abs(count / n - p) <= 4 * sigma


class TestDispatch(UnitTest):

    policy = BlockPolicy(5, 3, 0.5, 1.0)

    def test_full_block(self):
        kinds = pulses.dispatch_block(outcomes('SSSSS'), self.policy)
        assert kinds == [C] * 5

    def test_short_runs(self):
        kinds = pulses.dispatch_block(outcomes('SSFSS'), self.policy)
        assert kinds == [V] * 5

    def test_threshold_run(self):
        kinds = pulses.dispatch_block(outcomes('FSSSF'), self.policy, True)
        assert kinds == [V, C, C, C, V]
        kinds = pulses.dispatch_block(outcomes('FSSSF'), self.policy, False)
        assert kinds == [V] * 5

    def test_long_run(self):
        for branch in (True, False):
            kinds = pulses.dispatch_block(outcomes('SSSSF'), self.policy,
                                          branch)
            assert kinds == [C, C, C, C, V]

    def test_branch_source(self):
        rng = random.Random(1)
        seen = set()
        for ix in range(100):
            kinds = pulses.dispatch_block(outcomes('SSSFF'), self.policy, rng)
            seen.add(tuple(kinds))
        assert seen == set([(C, C, C, V, V), (V, V, V, V, V)])

    def test_branch_needed(self):
        assert_raises(DomainError, pulses.dispatch_block, outcomes('FSSSF'),
                      self.policy)
        policy = BlockPolicy(5, 3, 1.0, 1.0)
        kinds = pulses.dispatch_block(outcomes('FSSSF'), policy)
        assert kinds == [V, C, C, C, V]
        policy = BlockPolicy(5, 3, 0.0, 1.0)
        kinds = pulses.dispatch_block(outcomes('FSSSF'), policy)
        assert kinds == [V] * 5

    def test_wrong_length(self):
        assert_raises(DomainError, pulses.dispatch_block, outcomes('SSSS'),
                      self.policy, True)

    def test_two_runs(self):
        policy = SimpleNamespace(M=5, M_min=2, q=1.0)
        assert_raises(InvariantError, pulses.dispatch_block,
                      outcomes('SSFSS'), policy)

    def test_rows(self):
        policy = BlockPolicy(6, 4, 0.5, 1.0)
        patterns = list(itertools.product((True, False), repeat=6))
        for send in (True, False):
            rows = pulses.dispatch_rows(patterns, policy.M_min,
                                        [send] * len(patterns))
            for row, pattern in zip(rows, patterns):
                kinds = pulses.dispatch_block(pattern, policy, send)
                assert list(row) == [kind == C for kind in kinds]


class TestPairs(UnitTest):

    def test_classify(self):
        assert pulses.classify_pair(C, C) == PairClass.CC
        assert pulses.classify_pair(C, V) == PairClass.CV
        assert pulses.classify_pair(V, C) == PairClass.VC
        assert pulses.classify_pair(V, V) == PairClass.VV

    def test_expectations(self):
        det = signals.detection_probs(4 * math.log(2))
        clicks, errors, doubles = \
                pulses.pair_expectations(PairClass.CV, 0.0, det)
        assert math.isclose(clicks, 0.75, rel_tol=1e-15)
        assert math.isclose(errors, 0.375, rel_tol=1e-15)
        assert math.isclose(doubles, 0.25, rel_tol=1e-15)
        assert pulses.pair_expectations(PairClass.VC, 0.0, det) == \
                (clicks, errors, doubles)
        assert pulses.pair_expectations(PairClass.CC, 0.01, det) == \
                (det.s, 0.01, 0.0)
        assert pulses.pair_expectations(PairClass.VV, 0.01, det) == \
                (0.0, 0.0, 0.0)


class TestEnumeration(UnitTest):

    def test_boundary(self):
        for policy in (BlockPolicy(5, 3, 0.5, 1.0), BlockPolicy(8, 6, 0.0),
                       BlockPolicy(3, 2, 1.0)):
            for p_succ in (0.0, 0.27, 0.8, 1.0):
                expected = block.boundary_prob(p_succ, policy).p
                found = pulses.enumerate_boundary(p_succ, policy)
                assert close(expected, found, 1e-12)

    def test_agrees_with_closed_form(self):
        src = signals.SourceParams(0.16)
        strategies = [signals.Strategy.usd(), signals.Strategy.bob_device(),
                      signals.Strategy.med_fraction(src, 0.3),
                      signals.Strategy.med(1.0)]
        policies = [BlockPolicy(5, 3, 0.5, 0.8), BlockPolicy(7, 4, 0.0, 3.0),
                    BlockPolicy(9, 7, 1.0, 0.05), BlockPolicy(4, 3, 0.3, 1.0)]
        for strategy in strategies:
            for policy in policies:
                expected = block.metrics(src, strategy, policy)
                found = pulses.enumerate_exact(src, strategy, policy)
                for a, b in zip(expected, found):
                    assert close(a, b)

    def test_no_light(self):
        src = signals.SourceParams(0.0)
        result = pulses.enumerate_exact(src, signals.Strategy.usd(),
                                        BlockPolicy(5, 3, 0.5, 1.0))
        assert result.gain == 0.0
        assert result.dc == 0.0
        assert result.qber is UNDEFINED

    def test_too_long(self):
        src = signals.SourceParams(0.16)
        policy = BlockPolicy(pulses.MAX_ENUMERATION_M + 1, 10, 0.5, 1.0)
        assert_raises(DomainError, pulses.enumerate_exact, src,
                      signals.Strategy.usd(), policy)
        assert_raises(DomainError, pulses.enumerate_boundary, 0.5, policy)


class TestSampling(UnitTest):

    n = 10**6

    def sample(self, prev, cur, prev_ok=True, cur_ok=True, mu_beta=1.0,
               seed=1):
        rng = np.random.default_rng(seed)
        det = signals.detection_probs(mu_beta)
        shape = (self.n,)
        return det, pulses.sample_slots(np.full(shape, prev),
                                        np.full(shape, cur),
                                        np.broadcast_to(prev_ok, shape),
                                        np.broadcast_to(cur_ok, shape),
                                        det, rng.random((3, self.n)))

    def test_coherent_vacuum(self):
        det, (click, error, double) = self.sample(True, False)
        assert binomial_ok(click.sum(), self.n, det.t)
        assert binomial_ok(error.sum(), self.n, det.t / 2)
        assert binomial_ok(double.sum(), self.n, det.d)
        assert not np.any(double & ~click)

    def test_vacuum_coherent(self):
        det, (click, error, double) = self.sample(False, True, seed=2)
        assert binomial_ok(click.sum(), self.n, det.t)
        assert binomial_ok(error.sum(), self.n, det.t / 2)

    def test_vacuum(self):
        det, (click, error, double) = self.sample(False, False)
        assert not click.any() and not error.any() and not double.any()

    def test_aligned(self):
        det, (click, error, double) = self.sample(True, True, seed=3)
        assert binomial_ok(click.sum(), self.n, det.s)
        assert not error.any()
        assert not double.any()

    def test_misidentified(self):
        p_err = 0.1
        rng = np.random.default_rng(4)
        prev_ok = rng.random(self.n) >= p_err
        cur_ok = rng.random(self.n) >= p_err
        det, (click, error, double) = self.sample(True, True, prev_ok,
                                                  cur_ok, seed=5)
        expected = 2 * p_err * (1 - p_err) * det.s
        assert binomial_ok(error.sum(), self.n, expected)
