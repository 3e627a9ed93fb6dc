#!/usr/bin/env python

import math
import os
import sys
import unittest

import numpy as np
from scipy.special import logsumexp

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', '..', 'python'))

from comparator_bandits.engine import (ArmDistribution, SelectionEngine, WeightTable, ZTable,
                                       arm_weights, exponential_update, init_table, normalize_mix,
                                       sample_arm, transition)
from comparator_bandits.errors import AssumptionViolation, NumericalCollapseError
from comparator_bandits.kernels import ClassState, make_kernel


def probs(log_w):
    return np.exp(log_w - logsumexp(log_w))


class test_init_table(unittest.TestCase):

    def test_fixed(self):
        table = init_table(make_kernel('fixed', 4))
        self.assertEqual(table.t, 1)
        np.testing.assert_allclose(np.exp(table.log_w), [0.25] * 4, rtol=1e-15)

    def test_single_arm(self):
        np.testing.assert_allclose(np.exp(init_table(make_kernel('fixed', 1)).log_w), [1.0])

    def test_switching(self):
        table = init_table(make_kernel('switching', 3))
        np.testing.assert_allclose(np.exp(table.log_w), [1.0 / 3.0] * 3, rtol=1e-15)


class test_arm_weights(unittest.TestCase):

    def test_identity_grouping(self):
        kernel = make_kernel('fixed', 4)
        np.testing.assert_allclose(arm_weights(init_table(kernel), kernel), [math.log(0.25)] * 4)

    def test_contextual(self):
        kernel = make_kernel('contextual', 2, N=2)
        table = init_table(kernel)
        prior = dict(kernel.initial_prior())
        w = {s.payload: prior[s] for s in prior}
        expected = [w[(0, 0)] + w[(1, 0)], w[(0, 1)] + w[(1, 1)]]
        np.testing.assert_allclose(np.exp(arm_weights(table, kernel, side=1)), expected, rtol=1e-14)

    def test_periodic_phase(self):
        kernel = make_kernel('periodic', 2, tau_B=2)
        log_w = np.full(6, -np.inf)
        log_w[kernel.states(3).index(ClassState('periodic', (0, 1)))] = 0.0
        lw = arm_weights(WeightTable(log_w, 3, 0.0), kernel)
        self.assertEqual(lw[0], 0.0)
        self.assertEqual(lw[1], -np.inf)


class test_normalize_mix(unittest.TestCase):

    def test_uniform(self):
        dist = normalize_mix([math.log(2.0)] * 2, 0.0)
        np.testing.assert_allclose(dist.p, [0.5, 0.5])
        np.testing.assert_allclose(dist.q, [0.5, 0.5])

    def test_mixing(self):
        dist = normalize_mix([0.0, -np.inf], 0.5)
        np.testing.assert_allclose(dist.p, [1.0, 0.0])
        np.testing.assert_allclose(dist.q, [0.75, 0.25])

    def test_floor(self):
        dist = normalize_mix([0.0, -1000.0], 0.1)
        np.testing.assert_allclose(dist.q, [0.95, 0.05], atol=1e-12)
        self.assertGreaterEqual(dist.q[1], 0.1 / 2)
        self.assertAlmostEqual(dist.q.sum(), 1.0, places=12)

    def test_collapse(self):
        with self.assertRaises(NumericalCollapseError):
            normalize_mix([-np.inf, -np.inf], 0.0)


class test_sample_arm(unittest.TestCase):

    def test_degenerate(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            self.assertEqual(sample_arm(ArmDistribution(np.array([1.0, 0.0]), np.array([1.0, 0.0]), 0.0), rng), 0)
            self.assertEqual(sample_arm(ArmDistribution(np.array([0.0, 1.0]), np.array([0.0, 1.0]), 0.0), rng), 1)

    def test_reproducible_single_draw(self):
        q = np.array([0.5, 0.5])
        dist = ArmDistribution(q, q, 0.0)
        a = [sample_arm(dist, np.random.default_rng(7)) for _ in range(3)]
        self.assertEqual(len(set(a)), 1)

        rng, ref = np.random.default_rng(11), np.random.default_rng(11)
        arm = sample_arm(dist, rng)
        u = ref.random()
        self.assertEqual(arm, 0 if u <= 0.5 else 1)
        self.assertEqual(rng.random(), ref.random())


class test_exponential_update(unittest.TestCase):

    def test_zero_rate(self):
        kernel = make_kernel('switching', 3)
        table = init_table(kernel)
        z = exponential_update(table, [1.0, -0.5, 2.0], kernel, eta_prev=0.0)
        np.testing.assert_array_equal(z.log_z, table.log_w)

    def test_arithmetic(self):
        kernel = make_kernel('fixed', 2)
        z = exponential_update(init_table(kernel), [0.0, 1.0], kernel, eta_prev=1.0)
        np.testing.assert_allclose(np.exp(z.log_z), [0.5, 0.5 * math.exp(-1.0)], rtol=1e-15)

    def test_shift_invariance(self):
        kernel = make_kernel('contextual', 2, N=2)
        table = init_table(kernel)
        phi = np.array([0.3, -0.2])
        a = exponential_update(table, phi, kernel, side=0, eta_prev=0.8)
        b = exponential_update(table, phi + 5.0, kernel, side=0, eta_prev=0.8)
        np.testing.assert_allclose(probs(a.log_z), probs(b.log_z), atol=1e-12)

    def test_strict(self):
        kernel = make_kernel('fixed', 2)
        with self.assertRaises(AssumptionViolation):
            exponential_update(init_table(kernel), [-3.0, 0.0], kernel, eta_prev=1.0, strict=True)


class test_transition(unittest.TestCase):

    def test_fixed_identity(self):
        kernel = make_kernel('fixed', 3)
        z = exponential_update(init_table(kernel), [0.0, 0.4, 1.0], kernel, eta_prev=1.0)
        w = transition(z, kernel, 1.0)
        self.assertEqual(w.t, 2)
        np.testing.assert_allclose(w.log_w + w.log_scale, z.log_z, atol=1e-14)

    def test_switching_hand_values(self):
        kernel = make_kernel('switching', 2)
        w = transition(ZTable(np.zeros(2), 1, 0.0), kernel, 1.0)
        np.testing.assert_allclose(w.log_w + w.log_scale, [math.log(0.5)] * 4, atol=1e-14)
        self.assertEqual(w.log_w.max(), 0.0)

    def test_power_normalization(self):
        kernel = make_kernel('switching', 2)
        table = init_table(kernel)
        z = exponential_update(table, [0.0, 1.0], kernel, eta_prev=1.0)
        half = transition(z, kernel, 0.5)
        root = transition(z._replace(log_z=0.5 * z.log_z), kernel, 1.0)
        np.testing.assert_allclose(half.log_w + half.log_scale, root.log_w + root.log_scale, atol=1e-14)

    def test_mass_conservation(self):
        for kernel in (make_kernel('fixed', 3), make_kernel('switching', 3)):
            table = init_table(kernel)
            for _ in range(4):
                before = logsumexp(table.log_w) + table.log_scale
                z = exponential_update(table, np.zeros(3), kernel, eta_prev=1.0)
                table = transition(z, kernel, 1.0)
                self.assertAlmostEqual(logsumexp(table.log_w) + table.log_scale, before, places=12)
        for kernel in (make_kernel('contextual', 3, N=2), make_kernel('periodic', 3, tau_B=2)):
            table = init_table(kernel)
            for _ in range(4):
                before = logsumexp(table.log_w) + table.log_scale
                z = exponential_update(table, np.zeros(3), kernel, side=0, eta_prev=1.0)
                table = transition(z, kernel, 1.0)
                self.assertLessEqual(logsumexp(table.log_w) + table.log_scale, before + 1e-12)

    def test_increasing_rate(self):
        kernel = make_kernel('fixed', 2)
        z = exponential_update(init_table(kernel), [0.0, 0.0], kernel, eta_prev=1.0)
        with self.assertRaises(AssumptionViolation):
            transition(z, kernel, 1.5)


class test_selection_engine(unittest.TestCase):

    def test_long_run_stays_finite(self):
        kernel = make_kernel('fixed', 64)
        engine = SelectionEngine(kernel)
        phi = np.linspace(0.0, 1.0, 64)
        for t in range(1, 2001):
            dist = engine.distribution(0.0)
            engine.update(phi, 50.0, 50.0, last=(t == 2000))
        self.assertTrue(np.all(np.isfinite(dist.p)))
        self.assertAlmostEqual(dist.p.sum(), 1.0, places=12)
        self.assertEqual(int(np.argmax(dist.p)), 0)

    def test_last_round_skips_transition(self):
        engine = SelectionEngine(make_kernel('switching', 2))
        engine.update([0.0, 1.0], 1.0, 1.0, last=True)
        self.assertEqual(engine.t, 1)


if __name__ == '__main__':
    unittest.main()
