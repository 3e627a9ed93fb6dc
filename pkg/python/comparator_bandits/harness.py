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

import logging

import numpy as np

from .engine import SelectionEngine, sample_arm
from .errors import AssumptionViolation
from .ledger import RegretLedger
from .schedules import Mode, Schedule

logger = logging.getLogger(__name__)

TOL = 1e-12

# Audits that fail the episode in every run; the rest only with strict assumptions
HARD_AUDITS = ('bounded_update', 'monotone_eta', 'range_budget', 'exploration_floor', 'simplex')
DIAGNOSTIC_AUDITS = ('lagged_bounded_update',)


# ----------------------------------------------------------------------
class Audit():

    """ Runtime checks of the learning-rate and distribution contract.

    Parameters
    ----------
    mode : Mode
    W_budget : float
    strict : bool
        turn the diagnostic audits into hard failures
    """

    def __init__(self, mode, W_budget, strict=False):
        self.mode = Mode(mode)
        self.W_budget = W_budget
        self.strict = strict
        self.counts = {name: 0 for name in HARD_AUDITS + DIAGNOSTIC_AUDITS}

    def _fail(self, name, t, value):
        self.counts[name] += 1
        if name in HARD_AUDITS or self.strict:
            raise AssumptionViolation(name, t, value)
        logger.warning('assumption "%s" violated at round %d (value %r)', name, t, value)

    def check(self, t, phi, eta_prev, eta, d, dist):
        worst = float(np.max(-eta * phi))
        if worst > 1.0 + TOL:
            self._fail('bounded_update', t, worst)

        lagged = float(np.max(-eta_prev * phi))
        if lagged > 1.0 + TOL:
            self._fail('lagged_bounded_update', t, lagged)

        if eta > eta_prev:
            self._fail('monotone_eta', t, eta / eta_prev)

        budget = 1.0 if self.mode is Mode.BANDIT else self.W_budget
        if eta * d > budget * (1.0 + TOL):
            self._fail('range_budget', t, eta * d)

        floor = dist.epsilon / dist.q.size
        if np.any(dist.q < floor * (1.0 - TOL)):
            self._fail('exploration_floor', t, float(dist.q.min()))

        for name, v in (('p', dist.p), ('q', dist.q)):
            if abs(v.sum() - 1.0) > TOL or np.any(v < 0):
                self._fail('simplex', t, f'{name} sums to {v.sum()!r}')


# ----------------------------------------------------------------------
class Episode():

    """ One learner against one loss model.

    Parameters
    ----------
    kernel : Kernel
        comparator class of the learner
    model : LossModel
        loss generator, its T is the horizon
    mode : str
        full_centered, full_minshift or bandit
    W_budget : float
        complexity budget in nats
    comparators : dict, optional
        comparator id -> arm sequence, accounted in the ledger
    eta_cap : float, optional
        learning rate while the losses carry no information. Default `1.0`.
    bandit_origin : str, optional
        'first' or 'zero'. Default `'first'`.
    """

    def __init__(self, kernel, model, mode, W_budget, comparators=None,
                 eta_cap=1.0, bandit_origin='first'):

        assert kernel.M == model.M, f'kernel has {kernel.M} arms, loss model {model.M}'

        self.constr_params = {
            'mode': Mode(mode),
            'W_budget': float(W_budget),
            'eta_cap': float(eta_cap),
            'bandit_origin': bandit_origin,
        }
        self.kernel = kernel
        self.model = model
        self.comparators = dict(comparators or {})

    def run(self, **run_kw):

        """ Play all T rounds; returns the filled RegretLedger.

        Keyword arguments: ``seed`` (default 0), ``strict_assumptions``
        (default False), ``progress_every`` (default 1000).
        """

        seed = run_kw.pop('seed', 0)
        strict = run_kw.pop('strict_assumptions', False)
        progress_every = run_kw.pop('progress_every', 1000)
        assert not run_kw, f'unknown run parameters {sorted(run_kw)}'
        self.last_run_params = {'seed': seed, 'strict_assumptions': strict}

        cp = self.constr_params
        kernel, model = self.kernel, self.model
        T = model.T

        engine = SelectionEngine(kernel)
        schedule = Schedule(cp['mode'], kernel.M, cp['W_budget'], cp['eta_cap'], cp['bandit_origin'])
        audit = Audit(cp['mode'], cp['W_budget'], strict)
        ledger = RegretLedger(kernel.M, T, self.comparators, seed)
        rng = np.random.default_rng(seed)

        logger.info('episode start: kernel=%r mode=%s W=%.6g T=%d seed=%s',
                    kernel, cp['mode'].value, cp['W_budget'], T, seed)

        for t in range(1, T + 1):
            losses, side = model.losses_at(t)
            dist = engine.distribution(schedule.epsilon(t), side)
            arm = sample_arm(dist, rng)
            phi = schedule.phi(losses, dist, arm)
            eta_prev, eta, d, v = schedule.advance(phi, dist.p)
            audit.check(t, phi, eta_prev, eta, d, dist)
            engine.update(phi, eta_prev, eta, side, last=(t == T), strict=strict)
            ledger.record(t, arm, dist, losses, d, v)

            if progress_every and t % progress_every == 0:
                logger.debug('round %d/%d eta=%.6g eps=%.6g', t, T, eta, dist.epsilon)

        ledger.set_eta(schedule.state.eta_history)
        ledger.audit = dict(audit.counts)

        logger.info('episode done: seed=%s %s', seed,
                    ' '.join(f'{cid}={r:.6g}' for cid, r in ledger.regrets().items()))
        return ledger


# ----------------------------------------------------------------------
def run_episode(config, seed, strict_assumptions=None):

    """ Build kernel, loss model and comparators from a RunConfig and run one seed """

    kernel = config.make_kernel()
    model = config.make_model()
    comparators = {spec.name: spec.arm_sequence(model) for spec in config.comparators(model)}
    episode = Episode(kernel, model, config.mode, config.W_budget, comparators,
                      config.eta_cap, config.bandit_origin)
    if strict_assumptions is None:
        strict_assumptions = config.strict_assumptions
    return episode.run(seed=seed, strict_assumptions=strict_assumptions)
