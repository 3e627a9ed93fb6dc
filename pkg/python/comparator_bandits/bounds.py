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

""" Data-dependent regret bounds.

  centered           2 (1 + W) max D_t + 2 sqrt(W sum D_t^2)     full_centered
  minshift           6 sqrt(W sum D_t^2)                         full_minshift
  minshift_uniform   6 D sqrt(W T),  D = max_t D_t               full_minshift
  bandit             variance + mixing + range-tail terms        bandit
  bandit_uniform     bandit with every extended range at its max bandit

D_t is the loss range of round t, the bandit bounds use the extended range
over rounds t-1 and t.
"""

import math
from collections import namedtuple

import numpy as np

from .errors import InputError

BOUND_IDS = ('centered', 'minshift', 'minshift_uniform', 'bandit', 'bandit_uniform')

BOUNDS_BY_MODE = {
    'full_centered': ('centered',),
    'full_minshift': ('minshift', 'minshift_uniform'),
    'bandit': ('bandit', 'bandit_uniform'),
}

BoundInputs = namedtuple('BoundInputs', ['W', 'M', 'T', 'delta', 'delta_ext'])


class BoundReport(namedtuple('BoundReport',
                             ['bound_id', 'rhs', 'regret', 'slack', 'comparator', 'terms', 'inputs'])):
    __slots__ = ()

    @property
    def holds(self):
        return self.slack >= 0


# ----------------------------------------------------------------------
def bound_inputs(W, model):
    ranges = model.ranges()
    return BoundInputs(float(W), model.M, model.T, ranges.delta, ranges.delta_ext)


# ----------------------------------------------------------------------
def _bandit_terms(W, M, T, delta_ext):
    sum_sq = float(np.dot(delta_ext, delta_ext))
    k = min(T, math.ceil(math.sqrt(T / (M * W))))
    tail = float(np.sort(delta_ext)[::-1][:k].sum())
    return {
        'variance': 4.0 * math.sqrt(2.0 * M * W * sum_sq),
        'mixing': math.sqrt(M * W * (1.0 + math.log(T)) * sum_sq),
        'range_tail': 2.0 * W * M * tail,
    }


# ----------------------------------------------------------------------
def bound_terms(bound_id, inputs):

    """ Named terms of the right-hand side; the bound is their sum """

    W, M, T = inputs.W, inputs.M, inputs.T
    delta = np.asarray(inputs.delta, dtype=float)
    if bound_id == 'centered':
        return {'range': 2.0 * (1.0 + W) * float(delta.max()),
                'variance': 2.0 * math.sqrt(W * float(np.dot(delta, delta)))}
    if bound_id == 'minshift':
        return {'variance': 6.0 * math.sqrt(W * float(np.dot(delta, delta)))}
    if bound_id == 'minshift_uniform':
        return {'uniform': 6.0 * float(delta.max()) * math.sqrt(W * T)}

    delta_ext = np.asarray(inputs.delta_ext, dtype=float)
    if bound_id == 'bandit':
        return _bandit_terms(W, M, T, delta_ext)
    if bound_id == 'bandit_uniform':
        return _bandit_terms(W, M, T, np.full(T, delta_ext.max()))
    raise InputError(f'unknown bound "{bound_id}", expected one of {BOUND_IDS}')


# ----------------------------------------------------------------------
def bound_rhs(bound_id, inputs):
    return float(sum(bound_terms(bound_id, inputs).values()))


# ----------------------------------------------------------------------
def make_report(bound_id, inputs, regret, comparator=None):
    terms = bound_terms(bound_id, inputs)
    rhs = float(sum(terms.values()))
    summary = {'W': inputs.W, 'M': inputs.M, 'T': inputs.T,
               'max_delta': float(np.max(inputs.delta)),
               'sum_delta_sq': float(np.dot(inputs.delta, inputs.delta))}
    return BoundReport(bound_id, rhs, float(regret), rhs - float(regret), comparator, terms, summary)
