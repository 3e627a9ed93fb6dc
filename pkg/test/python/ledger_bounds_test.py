#!/usr/bin/env python

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', '..', 'python'))

from comparator_bandits.bounds import (BOUND_IDS, BOUNDS_BY_MODE, BoundInputs, bound_inputs,
                                       bound_rhs, bound_terms, make_report)
from comparator_bandits.engine import ArmDistribution
from comparator_bandits.environments import make_environment
from comparator_bandits.errors import InputError
from comparator_bandits.kernels import ComparatorPath
from comparator_bandits.ledger import RegretLedger, expected_regret


def fill(ledger, model, q):
    for t in range(1, model.T + 1):
        losses, _ = model.losses_at(t)
        ledger.record(t, int(np.argmax(q)), ArmDistribution(q, q, 0.0), losses, 0.0, 0.0)


class test_ledger(unittest.TestCase):

    def test_uniform_selection(self):
        model = make_environment('fixed_gap', 2, 40)
        ledger = RegretLedger(2, 40, {'best': [0] * 40, 'worst': [1] * 40})
        fill(ledger, model, np.array([0.5, 0.5]))
        self.assertAlmostEqual(ledger.regret('best'), 20.0)
        self.assertAlmostEqual(ledger.regret('worst'), -20.0)
        np.testing.assert_allclose(ledger.cumulative('best'), 0.5 * np.arange(1, 41))
        self.assertAlmostEqual(expected_regret(ledger, ComparatorPath(None, [0] * 40), model), 20.0)

    def test_degenerate_selection(self):
        model = make_environment('fixed_gap', 3, 10)
        ledger = RegretLedger(3, 10, {'own': [0] * 10})
        fill(ledger, model, np.array([1.0, 0.0, 0.0]))
        self.assertEqual(ledger.regret('own'), 0.0)

    def test_constant_losses(self):
        model = make_environment('fixed_gap', 3, 10, gap=0.0, affine=(1.0, 2.5))
        ledger = RegretLedger(3, 10, {'a': [1] * 10, 'b': [2, 0] * 5})
        fill(ledger, model, np.array([0.2, 0.3, 0.5]))
        self.assertEqual(ledger.regrets(), {'a': 0.0, 'b': 0.0})

    def test_shape_errors(self):
        with self.assertRaises(InputError):
            RegretLedger(2, 5, {'a': [0] * 4})
        ledger = RegretLedger(2, 5)
        with self.assertRaises(InputError):
            expected_regret(ledger, ComparatorPath(None, [0] * 5), make_environment('fixed_gap', 2, 6))


class test_bounds(unittest.TestCase):

    def test_modes(self):
        self.assertEqual(sorted(i for ids in BOUNDS_BY_MODE.values() for i in ids), sorted(BOUND_IDS))

    def test_full_minshift(self):
        inputs = BoundInputs(math.log(2), 2, 100, np.ones(100), np.ones(100))
        self.assertAlmostEqual(bound_rhs('minshift', inputs), 6 * math.sqrt(100 * math.log(2)), places=12)
        self.assertAlmostEqual(bound_rhs('minshift', inputs), 49.953, places=3)
        self.assertAlmostEqual(bound_rhs('minshift_uniform', inputs), 6 * math.sqrt(100 * math.log(2)), places=12)

    def test_full_centered(self):
        zero = BoundInputs(1.0, 3, 10, np.zeros(10), np.zeros(10))
        self.assertEqual(bound_rhs('centered', zero), 0.0)
        inputs = BoundInputs(1.0, 3, 4, np.array([1.0, 2.0, 0.0, 2.0]), np.zeros(4))
        self.assertAlmostEqual(bound_rhs('centered', inputs), 2 * 2 * 2 + 2 * 3.0)

    def test_bandit(self):
        inputs = BoundInputs(1.0, 2, 64, np.ones(64), np.ones(64))
        terms = bound_terms('bandit', inputs)
        self.assertAlmostEqual(terms['variance'], 64.0)
        self.assertAlmostEqual(terms['mixing'], math.sqrt(128 * (1 + math.log(64))))
        self.assertAlmostEqual(terms['range_tail'], 24.0)
        self.assertAlmostEqual(bound_rhs('bandit_uniform', inputs), bound_rhs('bandit', inputs))

    def test_corollary_dominates(self):
        rng = np.random.default_rng(0)
        delta = rng.uniform(0, 2, 200)
        inputs = BoundInputs(1.3, 3, 200, delta, delta)
        self.assertGreaterEqual(bound_rhs('minshift_uniform', inputs), bound_rhs('minshift', inputs))
        self.assertGreaterEqual(bound_rhs('bandit_uniform', inputs), bound_rhs('bandit', inputs))

    def test_report(self):
        inputs = bound_inputs(math.log(2), make_environment('fixed_gap', 2, 100))
        report = make_report('minshift', inputs, 10.0, 'best_fixed')
        self.assertTrue(report.holds)
        self.assertAlmostEqual(report.slack, report.rhs - 10.0)
        self.assertEqual(report.inputs['sum_delta_sq'], 100.0)
        self.assertFalse(make_report('minshift', inputs, 60.0).holds)
        with self.assertRaises(InputError):
            bound_rhs('unknown', inputs)


if __name__ == '__main__':
    unittest.main()
