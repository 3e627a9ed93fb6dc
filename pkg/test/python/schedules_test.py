#!/usr/bin/env python

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', '..', 'python'))

from comparator_bandits.engine import ArmDistribution
from comparator_bandits.errors import ConfigurationError, InputError
from comparator_bandits.schedules import (Mode, Schedule, ScheduleState, eps_bandit, eta_bandit,
                                          eta_full_centered, eta_full_minshift, phi_bandit,
                                          phi_full_centered, phi_full_minshift, update_stats)


def state_with(mode, W, V, D, Phi=0.0):
    state = ScheduleState(mode, W)
    state.V, state.D, state.Phi = V, D, Phi
    return state


class test_performance_measures(unittest.TestCase):

    def test_centered(self):
        np.testing.assert_array_equal(phi_full_centered([1.0, 1.0], [0.3, 0.7]), [0.0, 0.0])
        np.testing.assert_allclose(phi_full_centered([0.0, 1.0], [0.5, 0.5]), [-0.5, 0.5])

    def test_centering_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            losses = rng.normal(size=5)
            p = rng.dirichlet(np.ones(5))
            self.assertAlmostEqual(np.dot(p, phi_full_centered(losses, p)), 0.0, places=12)

    def test_minshift(self):
        np.testing.assert_array_equal(phi_full_minshift([3.0, 3.0, 3.0]), [0.0, 0.0, 0.0])
        np.testing.assert_array_equal(phi_full_minshift([2.0, 5.0]), [0.0, 3.0])

    def test_bandit(self):
        np.testing.assert_allclose(phi_bandit(1.0, 0, [0.5, 0.5], 0.0), [2.0, 0.0])
        np.testing.assert_array_equal(phi_bandit(0.7, 1, [0.5, 0.5], 0.7), [0.0, 0.0])
        with self.assertRaises(InputError):
            phi_bandit(1.0, 1, [1.0, 0.0], 0.0)

    def test_bandit_unbiased(self):
        losses, prev, q = np.array([0.3, 0.8]), 0.1, np.array([0.25, 0.75])
        rng = np.random.default_rng(2024)
        n = 20000
        draws = rng.choice(2, size=n, p=q)
        phi = np.array([phi_bandit(losses[i], i, q, prev) for i in draws])
        mean = phi.mean(axis=0)
        sigma = phi.std(axis=0) / math.sqrt(n)
        for m in range(2):
            self.assertLess(abs(mean[m] - (losses[m] - prev)), 5 * sigma[m])


class test_statistics(unittest.TestCase):

    def test_zero(self):
        state = ScheduleState('full_minshift', 1.0)
        self.assertEqual(update_stats(state, [0.0, 0.0], [0.5, 0.5]), (0.0, 0.0))

    def test_values(self):
        state = ScheduleState('full_centered', 1.0)
        self.assertEqual(update_stats(state, [-0.5, 0.5], [0.5, 0.5]), (1.0, 0.25))
        self.assertEqual(update_stats(state, [2.0, 0.0], [0.5, 0.5]), (2.0, 2.0))
        self.assertEqual(state.V, 2.25)
        self.assertEqual(state.D, 2.0)
        self.assertEqual(state.Phi, -0.5)


class test_learning_rates(unittest.TestCase):

    def test_full_centered(self):
        self.assertEqual(eta_full_centered(state_with('full_centered', 1.0, 4.0, 1.0)), 0.5)
        self.assertAlmostEqual(eta_full_centered(state_with('full_centered', 1.0, 0.01, 0.1, -2.0)), 0.5)

    def test_full_minshift(self):
        self.assertEqual(eta_full_minshift(state_with('full_minshift', 1.0, 4.0, 1.0)), 0.5)
        state = ScheduleState('full_minshift', 1.0, eta_cap=0.3)
        self.assertEqual(eta_full_minshift(state), 0.3)

    def test_bandit(self):
        self.assertEqual(eta_bandit(state_with('bandit', 2.0, 8.0, 4.0)), 0.25)
        self.assertEqual(eta_bandit(ScheduleState('bandit', 2.0)), 1.0)

    def test_exploration(self):
        self.assertEqual(eps_bandit(1, 4, math.log(4)), 0.5)
        self.assertEqual(eps_bandit(16, 4, 1.0), 0.5)
        eps = [eps_bandit(t, 4, 1.0) for t in range(1, 200)]
        self.assertTrue(all(b <= a for a, b in zip(eps[:-1], eps[1:])))
        self.assertLess(eps[-1], 0.5)
        with self.assertRaises(InputError):
            eps_bandit(0, 4, 1.0)

    def test_invalid_budget(self):
        with self.assertRaises(ConfigurationError):
            ScheduleState('bandit', 0.0)
        with self.assertRaises(ConfigurationError):
            Schedule('bandit', 2, 1.0, bandit_origin='last')


class test_schedule(unittest.TestCase):

    def test_degenerate_rounds_back_filled(self):
        schedule = Schedule('full_centered', 2, 1.0)
        p = np.array([0.5, 0.5])
        self.assertEqual(schedule.advance([0.0, 0.0], p)[:2], (1.0, 1.0))
        self.assertEqual(schedule.advance([0.0, 0.0], p)[:2], (1.0, 1.0))
        eta_prev, eta, d, v = schedule.advance([0.0, 2.0], p)
        self.assertEqual((eta_prev, eta, d, v), (0.5, 0.5, 2.0, 2.0))
        self.assertEqual(schedule.state.eta_history, [0.5, 0.5, 0.5])

    def test_nonincreasing(self):
        rng = np.random.default_rng(5)
        for mode in Mode:
            schedule = Schedule(mode, 3, 1.5)
            eta_D = []
            for _ in range(300):
                p = rng.dirichlet(np.ones(3))
                schedule.advance(rng.normal(size=3) * rng.uniform(0.1, 3.0), p)
                eta_D.append(schedule.state.eta_history[-1] * schedule.state.D)
            history = schedule.state.eta_history
            self.assertTrue(all(b <= a for a, b in zip(history[:-1], history[1:])), mode)
            if mode is Mode.BANDIT:
                self.assertLessEqual(max(eta_D), 1.0 + 1e-12)

    def test_affine_scaling(self):
        rng = np.random.default_rng(8)
        phis = rng.normal(size=(100, 4))
        ps = rng.dirichlet(np.ones(4), size=100)
        a = 3.0
        for mode in Mode:
            base, scaled = Schedule(mode, 4, 1.0), Schedule(mode, 4, 1.0)
            for phi, p in zip(phis, ps):
                base.advance(phi, p)
                scaled.advance(a * phi, p)
            np.testing.assert_allclose(a * np.array(scaled.state.eta_history),
                                       base.state.eta_history, rtol=1e-12)

    def test_epsilon(self):
        self.assertEqual(Schedule('full_minshift', 4, 1.0).epsilon(1), 0.0)
        self.assertEqual(Schedule('bandit', 4, math.log(4)).epsilon(1), 0.5)

    def test_bandit_origin(self):
        dist = ArmDistribution(np.array([0.5, 0.5]), np.array([0.5, 0.5]), 0.0)
        first = Schedule('bandit', 2, 1.0)
        np.testing.assert_array_equal(first.phi([1.0, 3.0], dist, 0), [0.0, 0.0])
        np.testing.assert_allclose(first.phi([2.0, 3.0], dist, 1), [0.0, 4.0])

        zero = Schedule('bandit', 2, 1.0, bandit_origin='zero')
        np.testing.assert_allclose(zero.phi([1.0, 3.0], dist, 0), [2.0, 0.0])

    def test_full_feedback_phi(self):
        dist = ArmDistribution(np.array([0.5, 0.5]), np.array([0.5, 0.5]), 0.0)
        np.testing.assert_allclose(Schedule('full_centered', 2, 1.0).phi([0.0, 1.0], dist, 0), [-0.5, 0.5])
        np.testing.assert_allclose(Schedule('full_minshift', 2, 1.0).phi([2.0, 5.0], dist, 1), [0.0, 3.0])


if __name__ == '__main__':
    unittest.main()
