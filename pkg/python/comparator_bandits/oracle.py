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

""" Brute-force reference: one weight per class path, no class merging.

Only the scalar kernel contract (``initial_prior``, ``transitions``,
``arm_of``) is used, so the vectorized propagation of the engine is checked
against an independent computation.
"""

import logging

import numpy as np
from scipy.special import logsumexp

from .errors import InputError, OracleOverflowError

logger = logging.getLogger(__name__)

MAX_PATHS = 2 * 10**6


# ----------------------------------------------------------------------
def _marginal(log_path, arms, M):
    mx = np.max(log_path)
    mass = np.bincount(arms, weights=np.exp(log_path - mx), minlength=M)
    return mass / mass.sum()


# ----------------------------------------------------------------------
def brute_force_oracle(kernel, phi, eta, contexts=None, max_paths=MAX_PATHS):

    """ p_t of every round from explicit class-path weights.

    Parameters
    ----------
    kernel : Kernel
    phi : array (T, M)
        performance measures phi_t
    eta : array (T,)
        learning rates eta_1..eta_T, eta_0 := eta_1
    contexts : sequence of int, optional
        context of every round, required by contextual kernels
    max_paths : int, optional
        refuse to enumerate more paths than this. Default `2*10**6`.

    Returns
    -------
    p : array (T, M)
    """

    phi = np.asarray(phi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    T, M = phi.shape
    if eta.shape != (T,) or M != kernel.M:
        raise InputError('phi must be (T, M) and eta (T,) for the kernel arms')
    side = (lambda t: None) if contexts is None else (lambda t: contexts[t - 1])

    states = kernel.states(1)
    index = {s: k for k, s in enumerate(states)}
    prior = kernel.initial_prior()
    last = np.array([index[s] for s, _ in prior])
    log_path = np.log(np.array([w for _, w in prior]))

    p = np.zeros((T, M))
    for t in range(1, T + 1):
        arms_of_class = np.array([kernel.arm_of(s, t, side(t)) for s in states])
        arms = arms_of_class[last]
        p[t - 1] = _marginal(log_path, arms, M)

        eta_prev = eta[t - 2] if t > 1 else eta[0]
        log_path = log_path - eta_prev * phi[t - 1, arms]
        if t == T:
            break

        ### power normalization: z_path * z_class^(r - 1)
        ratio = eta[t - 1] / eta_prev
        log_class = np.array([logsumexp(log_path[last == k]) if np.any(last == k) else -np.inf
                              for k in range(len(states))])
        log_path = log_path + (ratio - 1.0) * log_class[last]

        next_states = kernel.states(t + 1)
        next_index = {s: k for k, s in enumerate(next_states)}
        successors = [[(next_index[s], np.log(w)) for s, w in kernel.transitions(state, t)]
                      for state in states]
        count = sum(int(np.sum(last == k)) * len(succ) for k, succ in enumerate(successors))
        if count > max_paths:
            raise OracleOverflowError(f'{count} paths at round {t + 1} exceed the cap of {max_paths}')

        new_last, new_log = [], []
        for k, succ in enumerate(successors):
            members = log_path[last == k]
            for j, log_w in succ:
                new_last.append(np.full(members.size, j))
                new_log.append(members + log_w)
        last = np.concatenate(new_last)
        log_path = np.concatenate(new_log)
        states = next_states
        logger.debug('oracle round %d: %d paths', t + 1, last.size)

    return p
