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

import numpy as np

from .errors import InputError


# ----------------------------------------------------------------------
class RegretLedger():

    """ Per-round accounting of one episode.

    Regret against a comparator is expected regret: every round adds
    E_q[l_t] - l_{t, s_t}, with q the selection distribution of the round.

    Parameters
    ----------
    M : int
        number of arms
    T : int
        horizon
    comparators : dict, optional
        comparator id -> arm sequence s_1..s_T
    seed : int, optional
        seed of the episode's sampling stream
    """

    def __init__(self, M, T, comparators=None, seed=None):
        self.M = int(M)
        self.T = int(T)
        self.seed = seed

        self.arm = np.zeros(T, dtype=int)
        self.p = np.zeros((T, M))
        self.q = np.zeros((T, M))
        self.exp_loss = np.zeros(T)
        self.eta = np.zeros(T)
        self.eps = np.zeros(T)
        self.d = np.zeros(T)
        self.v = np.zeros(T)

        self.comparators = {}
        self.increments = {}
        for cid, arms in (comparators or {}).items():
            arms = np.asarray(arms, dtype=int)
            if arms.shape != (T,):
                raise InputError(f'comparator {cid} covers {arms.size} rounds, expected {T}')
            self.comparators[cid] = arms
            self.increments[cid] = np.zeros(T)

        self.audit = {}
        self.rounds = 0

    def record(self, t, arm, dist, losses, d, v):
        k = t - 1
        self.arm[k] = arm
        self.p[k] = dist.p
        self.q[k] = dist.q
        self.eps[k] = dist.epsilon
        self.exp_loss[k] = np.dot(dist.q, losses)
        self.d[k] = d
        self.v[k] = v
        for cid, arms in self.comparators.items():
            self.increments[cid][k] = self.exp_loss[k] - losses[arms[k]]
        self.rounds = t

    def set_eta(self, eta_history):
        self.eta[:len(eta_history)] = eta_history

    def cumulative(self, cid):
        return np.cumsum(self.increments[cid])

    def regret(self, cid):
        return float(self.cumulative(cid)[-1])

    def regrets(self):
        return {cid: self.regret(cid) for cid in self.comparators}


# ----------------------------------------------------------------------
def expected_regret(ledger, path, model):

    """ sum_t ( sum_m q_{t,m} l_{t,m} - l_{t, s_t} ) for the arms of ``path`` """

    arms = np.asarray(path.arms, dtype=int)
    l = model.matrix
    if arms.shape != (ledger.T,) or l.shape != ledger.q.shape:
        raise InputError('path, model and ledger must cover the same rounds and arms')
    increments = np.einsum('tm,tm->t', ledger.q, l) - l[np.arange(ledger.T), arms]
    return float(np.cumsum(increments)[-1])
