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

""" Selection engine: one round of exponential weighting over equivalence classes.

Weights live in the log domain. After every transition the table is shifted
so its largest entry is 0; the removed constant is accumulated in
``log_scale`` and never enters p or q.
"""

from collections import namedtuple

import numpy as np
from scipy.special import logsumexp

from .errors import AssumptionViolation, ConfigurationError, InputError, NumericalCollapseError

WeightTable = namedtuple('WeightTable', ['log_w', 't', 'log_scale'])
ZTable = namedtuple('ZTable', ['log_z', 't', 'log_scale'])
ArmDistribution = namedtuple('ArmDistribution', ['p', 'q', 'epsilon'])


# ----------------------------------------------------------------------
def init_table(kernel):

    """ Weight table at t=1 holding the log of the kernel's initial prior """

    log_w = kernel.log_prior()
    if log_w.size == 0:
        raise ConfigurationError(f'{kernel!r} has no classes')
    assert np.all(np.isfinite(log_w)), 'initial prior must be positive on every class'
    return WeightTable(log_w, 1, 0.0)


# ----------------------------------------------------------------------
def arm_weights(table, kernel, side=None):

    """ Log-sum-exp of the class log-weights grouped by the arm each class plays """

    arms = kernel.arms(table.t, side)
    assert arms.shape == table.log_w.shape, 'table does not cover the classes of round t'
    mx = np.max(table.log_w)
    if not np.isfinite(mx):
        return np.full(kernel.M, -np.inf)
    mass = np.bincount(arms, weights=np.exp(table.log_w - mx), minlength=kernel.M)
    with np.errstate(divide='ignore'):
        return np.log(mass) + mx


# ----------------------------------------------------------------------
def normalize_mix(arm_log_weights, epsilon):

    """ p from the arm log-weights, q = (1 - epsilon) p + epsilon / M """

    lw = np.asarray(arm_log_weights, dtype=float)
    if not 0.0 <= epsilon <= 1.0:
        raise InputError(f'exploration rate {epsilon} outside [0, 1]')
    if not np.any(np.isfinite(lw)):
        raise NumericalCollapseError('every arm weight is zero')

    p = np.exp(lw - logsumexp(lw))
    p /= p.sum()
    q = (1.0 - epsilon) * p + epsilon / lw.size
    return ArmDistribution(p, q, float(epsilon))


# ----------------------------------------------------------------------
def sample_arm(dist, rng):

    """ Inverse-CDF draw over arms in ascending order, one uniform per call.

    Boundary ties go to the lower arm; arms with q = 0 are never returned.
    """

    u = rng.random()
    q = dist.q
    cdf = np.cumsum(q)
    support = np.flatnonzero(q > 0)
    k = int(np.searchsorted(cdf, u, side='left'))
    while k < q.size and q[k] <= 0:
        k += 1
    return int(min(k, support[-1]))


# ----------------------------------------------------------------------
def exponential_update(table, phi, kernel, side=None, eta_prev=0.0, strict=False):

    """ log z = log w - eta_prev * phi[arm_of(class)] """

    phi = np.asarray(phi, dtype=float)
    if strict and np.any(-eta_prev * phi > 1.0 + 1e-12):
        raise AssumptionViolation('bounded update (-eta_{t-1} phi <= 1)', table.t,
                                  float(np.max(-eta_prev * phi)))
    arms = kernel.arms(table.t, side)
    return ZTable(table.log_w - eta_prev * phi[arms], table.t, table.log_scale)


# ----------------------------------------------------------------------
def transition(z, kernel, eta_ratio):

    """ Power-normalized transition of a z-table onto the classes of round t+1 """

    if not 0.0 < eta_ratio <= 1.0:
        raise AssumptionViolation('nonincreasing learning rate', z.t, eta_ratio)

    log_w = kernel.propagate(z.log_z, z.t, eta_ratio)
    mx = np.max(log_w)
    if not np.isfinite(mx):
        raise NumericalCollapseError(f'class weights collapsed at round {z.t + 1}')
    return WeightTable(log_w - mx, z.t + 1, eta_ratio * z.log_scale + mx)


# ----------------------------------------------------------------------
class SelectionEngine():

    """ Weight table of one episode together with the kernel it lives on.

    Parameters
    ----------
    kernel : Kernel
        comparator class the learner competes against
    """

    def __init__(self, kernel):
        self.kernel = kernel
        self.table = init_table(kernel)

    @property
    def t(self):
        return self.table.t

    def distribution(self, epsilon, side=None):
        return normalize_mix(arm_weights(self.table, self.kernel, side), epsilon)

    def update(self, phi, eta_prev, eta, side=None, last=False, strict=False):

        """ Exponential update with eta_prev, then transition with eta / eta_prev.

        With ``last`` the transition is skipped (there is no round T+1).
        """

        z = exponential_update(self.table, phi, self.kernel, side, eta_prev, strict)
        if last:
            self.table = WeightTable(z.log_z, z.t, z.log_scale)
            return self.table
        self.table = transition(z, self.kernel, eta / eta_prev)
        return self.table
