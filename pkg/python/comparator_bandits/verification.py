# Copyright (c) 2024 The comparator_bandits developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You may obtain a copy of the License at
#     https:#www.gnu.org/licenses/gpl-3.0.txt

""" Desk-scale verification suites run by ``comparator_bandits verify`` """

import logging
import math
from collections import namedtuple

import numpy as np

from .engine import SelectionEngine
from .environments import make_environment
from .harness import Episode, run_episode
from .kernels import make_kernel
from .oracle import brute_force_oracle
from .schedules import Schedule

logger = logging.getLogger(__name__)

SuiteResult = namedtuple('SuiteResult', ['name', 'passed', 'detail'])

ORACLE_KERNELS = (
    ('fixed', dict(M=3)),
    ('switching', dict(M=3)),
    ('contextual', dict(M=2, N=2)),
    ('periodic', dict(M=2, tau_B=2)),
)

# environment family -> (kernel family, kernel parameters, environment parameters)
AFFINE_SETUPS = {
    'fixed_gap': ('fixed', dict(M=3), dict()),
    'switching': ('switching', dict(M=3), dict(switches=3)),
    'contextual': ('contextual', dict(M=2, N=2), dict(N=2)),
    'periodic': ('periodic', dict(M=2, tau_B=2), dict(pattern=[0, 1])),
}

AFFINE_MAPS = ((3.0, 7.0), (0.1, -5.0))
MODES = ('full_centered', 'full_minshift', 'bandit')


# ----------------------------------------------------------------------
def engine_trajectory(kernel, phi, mode='full_minshift', W=1.0, contexts=None):

    """ p_t of the engine fed a fixed phi sequence, with the mode's learning rates.

    Returns (p, eta) with eta the back-filled rate history.
    """

    T = phi.shape[0]
    engine = SelectionEngine(kernel)
    schedule = Schedule(mode, kernel.M, W)
    p = np.zeros(phi.shape)
    for t in range(1, T + 1):
        side = None if contexts is None else contexts[t - 1]
        dist = engine.distribution(0.0, side)
        p[t - 1] = dist.p
        eta_prev, eta, _, _ = schedule.advance(phi[t - 1], dist.p)
        engine.update(phi[t - 1], eta_prev, eta, side, last=(t == T))
    return p, np.array(schedule.state.eta_history)


# ----------------------------------------------------------------------
def oracle_equivalence(T=8, seed=0, mode='full_centered', tol=1e-9):
    rng = np.random.default_rng(seed)
    worst, failed = 0.0, []
    for family, params in ORACLE_KERNELS:
        kernel = make_kernel(family, **params)
        phi = rng.uniform(-1.0, 1.0, size=(T, kernel.M))
        contexts = [t % params['N'] for t in range(T)] if family == 'contextual' else None
        p, eta = engine_trajectory(kernel, phi, mode, contexts=contexts)
        ref = brute_force_oracle(kernel, phi, eta, contexts)
        err = float(np.max(np.abs(p - ref)))
        worst = max(worst, err)
        if not err <= tol:
            failed.append(f'{family}: {err:.3g}')
    detail = f'max |p - p_oracle| = {worst:.3g}' + (f' ({", ".join(failed)})' if failed else '')
    return SuiteResult('oracle_equivalence', not failed, detail)


# ----------------------------------------------------------------------
def _episode(kernel_family, kernel_params, env_family, env_params, mode, T, affine=(1.0, 0.0)):
    kernel = make_kernel(kernel_family, **kernel_params)
    model = make_environment(env_family, kernel.M, T, affine=affine, **env_params)
    return Episode(kernel, model, mode, W_budget=math.log(kernel.M * 2.0),
                   comparators={'fixed0': [0] * T}), model


def regret_scales(regret, scaled, a, tol=1e-9):

    """ scaled == a * regret within tol relative; regrets near 0 get an absolute floor of tol * a """

    return math.isclose(scaled, a * regret, rel_tol=tol, abs_tol=tol * a * max(1.0, abs(regret)))


def affine_invariance(T=1000, seed=0, tol_q=1e-10, tol_regret=1e-9):
    failed, checked = [], 0
    for env_family, (kf, kp, ep) in AFFINE_SETUPS.items():
        for mode in MODES:
            base_ep, _ = _episode(kf, kp, env_family, ep, mode, T)
            base = base_ep.run(seed=seed)
            for a, b in AFFINE_MAPS:
                ep_ab, _ = _episode(kf, kp, env_family, ep, mode, T, affine=(a, b))
                other = ep_ab.run(seed=seed)
                checked += 1
                tag = f'{env_family}/{mode}/({a:g},{b:g})'
                if not np.array_equal(base.arm, other.arm):
                    failed.append(f'{tag}: arms differ')
                elif not np.allclose(base.q, other.q, rtol=0.0, atol=tol_q):
                    failed.append(f'{tag}: q differs by {np.max(np.abs(base.q - other.q)):.3g}')
                elif not regret_scales(base.regret('fixed0'), other.regret('fixed0'), a, tol_regret):
                    failed.append(f'{tag}: regret {other.regret("fixed0")!r} '
                                  f'vs {a * base.regret("fixed0")!r}')
    return SuiteResult('affine_invariance', not failed,
                       f'{checked} pairs checked' + (f'; {"; ".join(failed)}' if failed else ''))


# ----------------------------------------------------------------------
def _sample_ledgers(config=None, T=500):
    if config is not None:
        return [run_episode(config, seed) for seed in config.seeds]
    ledgers = []
    for env_family, (kf, kp, ep) in AFFINE_SETUPS.items():
        for mode in MODES:
            episode, _ = _episode(kf, kp, env_family, ep, mode, T)
            ledgers.append(episode.run(seed=1))
    return ledgers


def simplex(ledgers, tol=1e-12):
    bad = 0
    for ledger in ledgers:
        floor = ledger.eps[:, None] / ledger.M
        bad += int(np.sum(np.abs(ledger.p.sum(axis=1) - 1.0) > tol))
        bad += int(np.sum(np.abs(ledger.q.sum(axis=1) - 1.0) > tol))
        bad += int(np.sum(np.any(ledger.q < floor * (1.0 - tol), axis=1)))
        bad += int(np.sum(ledger.p < 0) + np.sum(ledger.q < 0))
    return SuiteResult('simplex', bad == 0, f'{len(ledgers)} episodes, {bad} bad rounds')


def monotone_eta(ledgers):
    bad = sum(int(np.sum(np.diff(ledger.eta) > 0)) for ledger in ledgers)
    return SuiteResult('monotone_eta', bad == 0, f'{len(ledgers)} episodes, {bad} increases')


# ----------------------------------------------------------------------
def run_suites(config=None):

    """ All suites in order; ``config`` replaces the default episodes of simplex/monotone_eta """

    results = [oracle_equivalence(), affine_invariance()]
    ledgers = _sample_ledgers(config)
    results += [simplex(ledgers), monotone_eta(ledgers)]
    for r in results:
        logger.info('suite %s: %s (%s)', r.name, 'PASS' if r.passed else 'FAIL', r.detail)
    return results
