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

""" Performance measures, running statistics and adaptive learning rates.

Three configurations are provided:

  full_centered   phi = l - E_p[l],      eta = min(sqrt(W/V), W/D, 1/|Phi|)
  full_minshift   phi = l - min l,       eta = min(sqrt(W/V), W/D)
  bandit          importance weighted,   eta = min(sqrt(W/V), 1/D),
                                         eps = min(1/2, sqrt(M W / t))

Every term whose statistic is still zero counts as +inf. While all terms are
+inf the loss sequence carried no information (phi is identically 0), the
rate is reported as ``eta_cap`` and the first informative rate is back-filled
over those rounds, so eta_{t-1} := eta_t at the first informative round.
"""

import enum
import math

import numpy as np

from .errors import ConfigurationError, InputError


class Mode(enum.Enum):
    FULL_CENTERED = 'full_centered'
    FULL_MINSHIFT = 'full_minshift'
    BANDIT = 'bandit'


# ----------------------------------------------------------------------
class ScheduleState():

    """ Running statistics of one episode.

    Parameters
    ----------
    mode : Mode
    W_budget : float
        complexity budget W in nats, W > 0
    eta_cap : float, optional
        rate used while every schedule term is degenerate. Default `1.0`.
    """

    def __init__(self, mode, W_budget, eta_cap=1.0):
        if not W_budget > 0:
            raise ConfigurationError(f'W_budget must be positive, got {W_budget}')
        if not eta_cap > 0:
            raise ConfigurationError(f'eta_cap must be positive, got {eta_cap}')
        self.mode = Mode(mode)
        self.W_budget = float(W_budget)
        self.eta_cap = float(eta_cap)
        self.V = 0.0
        self.D = 0.0
        self.Phi = math.inf
        self.eta_history = []
        self.informative = False
        self.prev_obs_loss = None


# ----------------------------------------------------------------------
def phi_full_centered(losses, p):
    losses = np.asarray(losses, dtype=float)
    return losses - np.dot(p, losses)


# ----------------------------------------------------------------------
def phi_full_minshift(losses):
    losses = np.asarray(losses, dtype=float)
    return losses - np.min(losses)


# ----------------------------------------------------------------------
def phi_bandit(observed_loss, arm, q, prev_obs_loss):

    """ Importance-weighted difference to the previously observed loss """

    q = np.asarray(q, dtype=float)
    if not q[arm] > 0:
        raise InputError(f'arm {arm} was drawn with selection probability {q[arm]}')
    phi = np.zeros(q.size)
    phi[arm] = (observed_loss - prev_obs_loss) / q[arm]
    return phi


# ----------------------------------------------------------------------
def update_stats(state, phi, p):

    """ Fold one round into V, D and Phi; returns (d_t, v_t) """

    phi = np.asarray(phi, dtype=float)
    d = float(np.max(phi) - np.min(phi))
    v = float(np.dot(p, phi * phi))
    state.V += v
    state.D = max(state.D, d)
    state.Phi = min(state.Phi, float(np.min(phi)))
    return d, v


# -- raw schedule terms, +inf when degenerate

def _sqrt_term(state):
    return math.sqrt(state.W_budget / state.V) if state.V > 0 else math.inf


def _range_term(state, numerator):
    return numerator / state.D if state.D > 0 else math.inf


def _settle(state, raw):
    if math.isinf(raw):
        return state.eta_cap if not state.informative else state.eta_history[-1]
    if not state.informative:
        return raw
    return min(state.eta_history[-1], raw)


# ----------------------------------------------------------------------
def eta_full_centered(state):
    guard = 1.0 / -state.Phi if state.Phi < 0 else math.inf
    raw = min(_sqrt_term(state), _range_term(state, state.W_budget), guard)
    return _settle(state, raw)


# ----------------------------------------------------------------------
def eta_full_minshift(state):
    return _settle(state, min(_sqrt_term(state), _range_term(state, state.W_budget)))


# ----------------------------------------------------------------------
def eta_bandit(state):
    return _settle(state, min(_sqrt_term(state), _range_term(state, 1.0)))


# ----------------------------------------------------------------------
def eps_bandit(t, M, W):
    if t < 1:
        raise InputError(f'round {t} < 1')
    return min(0.5, math.sqrt(M * W / t))


_ETA = {
    Mode.FULL_CENTERED: eta_full_centered,
    Mode.FULL_MINSHIFT: eta_full_minshift,
    Mode.BANDIT: eta_bandit,
}


# ----------------------------------------------------------------------
class Schedule():

    """ Per-episode driver of the performance measure and the learning rate.

    Parameters
    ----------
    mode : str or Mode
        full_centered, full_minshift or bandit
    M : int
        number of arms
    W_budget : float
        complexity budget W in nats
    eta_cap : float, optional
        rate while every schedule term is degenerate. Default `1.0`.
    bandit_origin : str, optional
        'first' takes the previously observed loss at t=1 to be the first
        observation itself, 'zero' takes it to be 0. Default `'first'`.
    """

    def __init__(self, mode, M, W_budget, eta_cap=1.0, bandit_origin='first'):
        if bandit_origin not in ('first', 'zero'):
            raise ConfigurationError(f'unknown bandit origin "{bandit_origin}"')
        self.state = ScheduleState(mode, W_budget, eta_cap)
        self.M = int(M)
        self.bandit_origin = bandit_origin

    @property
    def mode(self):
        return self.state.mode

    @property
    def full_feedback(self):
        return self.state.mode is not Mode.BANDIT

    def epsilon(self, t):
        if self.full_feedback:
            return 0.0
        return eps_bandit(t, self.M, self.state.W_budget)

    def phi(self, losses, dist, arm):

        """ Performance measure of the round; in bandit mode only losses[arm] is read """

        if self.state.mode is Mode.FULL_CENTERED:
            return phi_full_centered(losses, dist.p)
        if self.state.mode is Mode.FULL_MINSHIFT:
            return phi_full_minshift(losses)

        observed = float(losses[arm])
        prev = self.state.prev_obs_loss
        if prev is None:
            prev = observed if self.bandit_origin == 'first' else 0.0
        self.state.prev_obs_loss = observed
        return phi_bandit(observed, arm, dist.q, prev)

    def advance(self, phi, p):

        """ Fold phi into the statistics and settle the rate.

        Returns (eta_prev, eta, d, v): eta_prev is the rate of the exponential
        update, eta / eta_prev the power of the transition.
        """

        state = self.state
        d, v = update_stats(state, phi, p)
        eta = _ETA[state.mode](state)

        if not state.informative and state.V + state.D > 0:
            state.informative = True
            state.eta_history = [eta] * len(state.eta_history)
            eta_prev = eta
        else:
            eta_prev = state.eta_history[-1] if state.eta_history else eta

        state.eta_history.append(eta)
        return eta_prev, eta, d, v
