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

""" Comparator classes: equivalence-class state spaces and their transition kernels.

A kernel describes the competition class the learner is built against. It
owns the ordered classes of every round, the prior over the classes of
round 1, the transition weights from a class of round t to one of round t+1
and the arm every class plays. Arms, contexts and periodic phases are 0-based, rounds are 1-based.
"""

import itertools
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.special import logsumexp

from .errors import ConfigurationError, InputError

logger = logging.getLogger(__name__)

FAMILIES = ('fixed', 'switching', 'contextual', 'periodic')

# Desk-scale cap on fully enumerated class spaces
MAX_CLASSES = 4096


class ClassState(namedtuple('ClassState', ['family', 'payload'])):
    """ One equivalence class of comparators.

    payload layout per family:
      fixed       (m,)
      switching   (m, tau)        tau = rounds since the last switch
      contextual  (M(0), ..., M(N-1))   context -> arm mapping
      periodic    (G(0), ..., G(tau-1)) phase -> arm mapping, period = len
    """
    __slots__ = ()


ComparatorPath = namedtuple('ComparatorPath', ['states', 'arms'])


# ----------------------------------------------------------------------
def region_count(mapping):

    """ Number of maximal runs of equal consecutive values in ``mapping`` """

    mapping = tuple(mapping)
    assert len(mapping) >= 1, 'mapping must cover at least one context'
    return 1 + sum(1 for a, b in zip(mapping[:-1], mapping[1:]) if a != b)


# ----------------------------------------------------------------------
class Kernel():

    """ Comparator-class contract.

    Subclasses implement ``initial_prior``, ``transitions``, ``arm_of``,
    ``states``, ``class_count`` and ``embed``. The vectorized
    ``arms``/``propagate`` defaults go through the generic contract and are
    overridden where the class space has structure to exploit.

    Parameters
    ----------
    M : int
        number of arms
    renormalize_rows : bool, optional
        divide every transition row by its total mass. Default `False`.
    """

    family = None

    def __init__(self, M, renormalize_rows=False):
        if int(M) < 1:
            raise ConfigurationError(f'{self.family} kernel needs M >= 1, got {M}')
        self.M = int(M)
        self.renormalize_rows = bool(renormalize_rows)
        self._prior = None

    def __repr__(self):
        return f'{type(self).__name__}(M={self.M})'

    # -- contract

    def initial_prior(self):
        raise NotImplementedError

    def transitions(self, state, t):
        raise NotImplementedError

    def arm_of(self, state, t, side=None):
        raise NotImplementedError

    def states(self, t):
        raise NotImplementedError

    def class_count(self, t):
        raise NotImplementedError

    def embed(self, arms, contexts=None):
        raise NotImplementedError

    # -- derived quantities

    def prior_weight(self, state):
        if self._prior is None:
            self._prior = dict(self.initial_prior())
        return self._prior.get(state, 0.0)

    def log_prior(self):
        """ Log prior aligned with ``states(1)`` """
        prior = dict(self.initial_prior())
        with np.errstate(divide='ignore'):
            return np.log(np.array([prior.get(s, 0.0) for s in self.states(1)]))

    def transition_weight(self, src, dst, t):
        for succ, w in self.transitions(src, t):
            if succ == dst:
                return w
        return 0.0

    def arms(self, t, side=None):
        """ Arm played by every class of round t, in ``states(t)`` order """
        return np.array([self.arm_of(s, t, side) for s in self.states(t)], dtype=int)

    def propagate(self, log_z, t, eta_ratio):

        """ Log-domain transition of a z-table over the classes of round t onto those of round t+1.

        Returns log w'(l') = logsumexp_l [ log T(l'|l) + eta_ratio * log z(l) ]
        in ``states(t+1)`` order.
        """

        x = eta_ratio * np.asarray(log_z, dtype=float)
        index = {s: k for k, s in enumerate(self.states(t + 1))}
        terms = [[] for _ in range(len(index))]
        for k, state in enumerate(self.states(t)):
            if not np.isfinite(x[k]):
                continue
            for succ, w in self.transitions(state, t):
                assert succ in index, f'kernel emitted {succ} outside the classes of round {t + 1}'
                terms[index[succ]].append(math.log(w) + x[k])
        return np.array([logsumexp(v) if v else -np.inf for v in terms])

    def _check_arm(self, m):
        if not 0 <= m < self.M:
            raise InputError(f'arm {m} outside 0..{self.M - 1}')


# ----------------------------------------------------------------------
class FixedKernel(Kernel):

    """ Best fixed arm: one class per arm, diagonal transitions, uniform prior """

    family = 'fixed'

    def __init__(self, M, renormalize_rows=False):
        super().__init__(M, renormalize_rows)
        self._states = [ClassState('fixed', (m,)) for m in range(self.M)]

    def initial_prior(self):
        return [(s, 1.0 / self.M) for s in self._states]

    def transitions(self, state, t):
        return [(state, 1.0)]

    def transition_weight(self, src, dst, t):
        return 1.0 if src == dst else 0.0

    def arm_of(self, state, t, side=None):
        return state.payload[0]

    def states(self, t):
        return list(self._states)

    def class_count(self, t):
        return 1 if t == 0 else self.M

    def arms(self, t, side=None):
        return np.arange(self.M)

    def propagate(self, log_z, t, eta_ratio):
        return eta_ratio * np.asarray(log_z, dtype=float)

    def embed(self, arms, contexts=None):
        for m in arms:
            self._check_arm(m)
        return ComparatorPath([ClassState('fixed', (int(m),)) for m in arms], list(arms))


# ----------------------------------------------------------------------
class SwitchingKernel(Kernel):

    """ Switching arms: class (m, tau) with tau the age of the current segment.

    Round t holds every (m, tau) with 1 <= tau <= t, laid out arm-major so a
    table over round t reshapes to (M, t).
    """

    family = 'switching'

    def __init__(self, M, renormalize_rows=False):
        super().__init__(M, renormalize_rows)
        if self.M < 2:
            raise ConfigurationError('switching kernel needs M >= 2')

    def _stay(self, tau):
        return tau / (tau + 1.0)

    def _switch(self, tau):
        return 1.0 / ((self.M - 1) * (tau + 1.0))

    def initial_prior(self):
        return [(ClassState('switching', (m, 1)), 1.0 / self.M) for m in range(self.M)]

    def transitions(self, state, t):
        m, tau = state.payload
        assert 1 <= tau <= t, f'age {tau} unreachable at round {t}'
        out = [(ClassState('switching', (m, tau + 1)), self._stay(tau))]
        out += [(ClassState('switching', (k, 1)), self._switch(tau))
                for k in range(self.M) if k != m]
        return out

    def transition_weight(self, src, dst, t):
        (m, tau), (k, age) = src.payload, dst.payload
        if k == m and age == tau + 1:
            return self._stay(tau)
        if k != m and age == 1:
            return self._switch(tau)
        return 0.0

    def arm_of(self, state, t, side=None):
        return state.payload[0]

    def states(self, t):
        return [ClassState('switching', (m, tau))
                for m in range(self.M) for tau in range(1, t + 1)]

    def class_count(self, t):
        return 1 if t == 0 else self.M * t

    def arms(self, t, side=None):
        return np.repeat(np.arange(self.M), t)

    def propagate(self, log_z, t, eta_ratio):
        x = eta_ratio * np.asarray(log_z, dtype=float).reshape(self.M, t)
        tau = np.arange(1, t + 1)

        new = np.empty((self.M, t + 1))
        new[:, 1:] = np.log(tau / (tau + 1.0)) + x

        ### mass leaving arm m, then collected by every other arm
        leaving = logsumexp(x - np.log(tau + 1.0), axis=1)
        others = leaving[None, :] + np.where(np.eye(self.M, dtype=bool), -np.inf, 0.0)
        new[:, 0] = logsumexp(others, axis=1) - np.log(self.M - 1.0)
        return new.ravel()

    def embed(self, arms, contexts=None):
        states = []
        for t, m in enumerate(arms):
            self._check_arm(m)
            if t > 0 and states[-1].payload[0] == m:
                tau = states[-1].payload[1] + 1
            else:
                tau = 1
            states.append(ClassState('switching', (int(m), tau)))
        return ComparatorPath(states, list(arms))


# ----------------------------------------------------------------------
class _EnumeratedKernel(Kernel):

    """ Shared machinery of the fully enumerated (contextual, periodic) kernels.

    Their weights depend on the round through 1/n, evaluated at the round
    being entered: a transition out of round t uses n = t + 1, so staying on
    a class always keeps weight 1 - 1/n > 0.
    """

    def _setup(self, payloads):
        if len(payloads) > MAX_CLASSES:
            raise ConfigurationError(
                f'{self.family} kernel has {len(payloads)} classes, cap is {MAX_CLASSES}')
        self._states = [ClassState(self.family, tuple(int(a) for a in p)) for p in payloads]
        self._index = {s: k for k, s in enumerate(self._states)}
        self.K = len(self._states)

    def _log_stay(self, t):
        if self.K == 1:
            return 0.0
        return math.log(1.0 - 1.0 / (t + 1))

    def _log_row_mass(self, t):
        raise NotImplementedError

    def _raw_weight(self, src, dst, t):
        raise NotImplementedError

    def transition_weight(self, src, dst, t):
        if src not in self._index or dst not in self._index:
            return 0.0
        w = self._raw_weight(src, dst, t)
        if self.renormalize_rows and w > 0:
            w /= math.exp(self._log_row_mass(t)[self._index[src]])
        return w

    def transitions(self, state, t):
        assert state in self._index, f'{state} is not a {self.family} class'
        out = []
        for dst in self._states:
            w = self.transition_weight(state, dst, t)
            if w > 0:
                out.append((dst, w))
        return out

    def states(self, t):
        return list(self._states)

    def class_count(self, t):
        return 1 if t == 0 else self.K


# ----------------------------------------------------------------------
class ContextualKernel(_EnumeratedKernel):

    """ Context-to-arm mappings, one class per mapping.

    Parameters
    ----------
    M : int
        number of arms
    N : int
        size of the ordered context alphabet
    renormalize_rows : bool, optional
        divide every transition row by its total mass. Default `False`.
    """

    family = 'contextual'

    def __init__(self, M, N, renormalize_rows=False):
        super().__init__(M, renormalize_rows)
        if N is None or int(N) < 1:
            raise ConfigurationError(f'contextual kernel needs N >= 1, got {N}')
        self.N = int(N)
        if self.M ** self.N > MAX_CLASSES:
            raise ConfigurationError(
                f'contextual kernel has M^N = {self.M ** self.N} classes, cap is {MAX_CLASSES}')
        self._maps = np.array(list(itertools.product(range(self.M), repeat=self.N)), dtype=int)
        self._setup(self._maps)
        self._regions = np.array([region_count(p) for p in self._maps])
        self._log_a = -math.log(2.0 * self.N * self.M)

    def __repr__(self):
        return f'ContextualKernel(M={self.M}, N={self.N})'

    def initial_prior(self):
        log_w = self._regions * self._log_a
        w = np.exp(log_w - logsumexp(log_w))
        return list(zip(self._states, w.tolist()))

    def _log_row_mass(self, t):
        if self.K == 1:
            return np.zeros(1)
        total = logsumexp(self._regions * self._log_a)
        own = self._regions * self._log_a
        with np.errstate(divide='ignore'):
            switch = -math.log(t + 1) + total + np.log(-np.expm1(own - total))
        return np.logaddexp(self._log_stay(t), switch)

    def _raw_weight(self, src, dst, t):
        if src == dst:
            return math.exp(self._log_stay(t))
        return math.exp(-math.log(t + 1) + region_count(dst.payload) * self._log_a)

    def _context(self, side):
        if side is None:
            raise InputError('contextual kernel needs the round context')
        c = int(side)
        if not 0 <= c < self.N:
            raise InputError(f'context {c} outside 0..{self.N - 1}')
        return c

    def arm_of(self, state, t, side=None):
        return state.payload[self._context(side)]

    def arms(self, t, side=None):
        return self._maps[:, self._context(side)]

    def propagate(self, log_z, t, eta_ratio):
        x = eta_ratio * np.asarray(log_z, dtype=float)
        if self.renormalize_rows:
            x = x - self._log_row_mass(t)
        if self.K == 1:
            return x.copy()

        total = logsumexp(x)
        with np.errstate(divide='ignore'):
            others = total + np.log(np.maximum(-np.expm1(x - total), 0.0))
        switch_in = -math.log(t + 1) + self._regions * self._log_a + others
        return np.logaddexp(self._log_stay(t) + x, switch_in)

    def embed(self, arms, contexts=None):
        for m in arms:
            self._check_arm(m)
        states = [ClassState('contextual', (int(m),) * self.N) for m in arms]
        return ComparatorPath(states, list(arms))

    def lift_mapping(self, mapping, T):
        """ Constant path on one mapping over T rounds """
        state = ClassState('contextual', tuple(int(a) for a in mapping))
        if state not in self._index:
            raise InputError(f'mapping {mapping} is not a class of {self!r}')
        return ComparatorPath([state] * T, None)


# ----------------------------------------------------------------------
class PeriodicKernel(_EnumeratedKernel):

    """ Periodic arm patterns of period tau <= tau_B.

    The phase of round t is (t - 1) mod tau, anchored at t = 1 for every class.
    G' extends G when tau' > tau and G' agrees with G on phases 0..tau-1.
    """

    family = 'periodic'

    def __init__(self, M, tau_B, renormalize_rows=False):
        super().__init__(M, renormalize_rows)
        if tau_B is None or int(tau_B) < 1:
            raise ConfigurationError(f'periodic kernel needs tau_B >= 1, got {tau_B}')
        self.tau_B = int(tau_B)
        size = sum(self.M ** tau for tau in range(1, self.tau_B + 1))
        if size > MAX_CLASSES:
            raise ConfigurationError(
                f'periodic kernel has {size} classes, cap is {MAX_CLASSES}')

        payloads = [g for tau in range(1, self.tau_B + 1)
                    for g in itertools.product(range(self.M), repeat=tau)]
        self._setup(payloads)
        self._period = np.array([len(g) for g in payloads])

        self._padded = np.zeros((self.K, self.tau_B), dtype=int)
        for k, g in enumerate(payloads):
            self._padded[k, :len(g)] = g

        ### proper prefixes of every class, -1 padded
        self._prefix = -np.ones((self.K, max(self.tau_B - 1, 1)), dtype=int)
        for k, g in enumerate(payloads):
            for tau in range(1, len(g)):
                self._prefix[k, tau - 1] = self._index[ClassState('periodic', tuple(g[:tau]))]

        self._log_2M = math.log(2.0 * self.M)

    def __repr__(self):
        return f'PeriodicKernel(M={self.M}, tau_B={self.tau_B})'

    def initial_prior(self):
        w = 0.5 * np.exp(-self._period * self._log_2M)
        return list(zip(self._states, w.tolist()))

    @staticmethod
    def extends(src, dst):
        g, h = src.payload, dst.payload
        return len(h) > len(g) and h[:len(g)] == g

    def _log_row_mass(self, t):
        if self.K == 1:
            return np.zeros(1)
        tau = self._period
        ext = np.array([sum(2.0 ** -k for k in range(1, self.tau_B - p + 1)) for p in tau])
        every = sum(2.0 ** -k for k in range(1, self.tau_B + 1))
        own = np.exp(-tau * self._log_2M)
        switch = (ext + every - own - own * ext) / (2.0 * (t + 1))
        return np.log(math.exp(self._log_stay(t)) + switch)

    def _raw_weight(self, src, dst, t):
        if src == dst:
            return math.exp(self._log_stay(t))
        tau, tau_next = len(src.payload), len(dst.payload)
        if self.extends(src, dst):
            return math.exp((tau - tau_next) * self._log_2M) / (2.0 * (t + 1))
        return math.exp(-tau_next * self._log_2M) / (2.0 * (t + 1))

    def arm_of(self, state, t, side=None):
        g = state.payload
        return g[(t - 1) % len(g)]

    def arms(self, t, side=None):
        return self._padded[np.arange(self.K), (t - 1) % self._period]

    def propagate(self, log_z, t, eta_ratio):
        x = eta_ratio * np.asarray(log_z, dtype=float)
        if self.renormalize_rows:
            x = x - self._log_row_mass(t)
        if self.K == 1:
            return x.copy()

        total = logsumexp(x)
        log_c = -math.log(2.0 * (t + 1))
        has_prefix = self._prefix >= 0
        px = np.where(has_prefix, x[np.where(has_prefix, self._prefix, 0)], -np.inf)

        ### mass from proper prefixes, penalized by the extension length
        shift = (self._period[np.where(has_prefix, self._prefix, 0)]
                 - self._period[:, None]) * self._log_2M
        with np.errstate(invalid='ignore', divide='ignore'):
            ext_in = log_c + logsumexp(np.where(has_prefix, px + shift, -np.inf), axis=1)

        ### mass from every other class
        claimed = np.exp(x - total) + np.exp(px - total).sum(axis=1)
        with np.errstate(divide='ignore'):
            rest = total + np.log(np.maximum(1.0 - claimed, 0.0))
        other_in = log_c - self._period * self._log_2M + rest

        return np.logaddexp(self._log_stay(t) + x, np.logaddexp(ext_in, other_in))

    def embed(self, arms, contexts=None):
        for m in arms:
            self._check_arm(m)
        states = [ClassState('periodic', (int(m),)) for m in arms]
        return ComparatorPath(states, list(arms))

    def lift_period(self, pattern, T):
        """ Constant path on one period mapping over T rounds """
        state = ClassState('periodic', tuple(int(a) for a in pattern))
        if state not in self._index:
            raise InputError(f'period mapping {pattern} is not a class of {self!r}')
        arms = [self.arm_of(state, t) for t in range(1, T + 1)]
        return ComparatorPath([state] * T, arms)


# ----------------------------------------------------------------------
def make_kernel(family, M, N=None, tau_B=None, renormalize_rows=False):

    """ Construct a kernel by family name """

    if family == 'fixed':
        return FixedKernel(M, renormalize_rows)
    elif family == 'switching':
        return SwitchingKernel(M, renormalize_rows)
    elif family == 'contextual':
        return ContextualKernel(M, N, renormalize_rows)
    elif family == 'periodic':
        return PeriodicKernel(M, tau_B, renormalize_rows)
    raise ConfigurationError(f'unknown kernel family "{family}", expected one of {FAMILIES}')


# ----------------------------------------------------------------------
def complexity(kernel, path, T=None):

    """ Complexity W of a comparator path over T rounds.

    log(max_{1<=t<=T} class_count(t - 1)) - sum_t log w(s_t | s_{t-1}),
    with one class before round 1 and w(s_1 | s_0) the prior weight. A zero
    weight step gives ``math.inf``.
    """

    states = list(path.states)
    T = len(states) if T is None else int(T)
    if not 1 <= T <= len(states):
        raise InputError(f'horizon {T} not covered by a path of length {len(states)}')

    count = max(kernel.class_count(t - 1) for t in range(1, T + 1))

    w = kernel.prior_weight(states[0])
    if w <= 0:
        return math.inf
    total = -math.log(w)
    for t in range(2, T + 1):
        w = kernel.transition_weight(states[t - 2], states[t - 1], t - 1)
        if w <= 0:
            logger.debug('path leaves the support of %r at round %d', kernel, t)
            return math.inf
        total -= math.log(w)
    return math.log(count) + total
