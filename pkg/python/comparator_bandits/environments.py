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

""" Deterministic adversarial loss generators.

Every model materializes its full T x M loss matrix once, from its own
seeded generator, and applies the affine maps last.
"""

import copy
import logging
from collections import namedtuple

import numpy as np

from .errors import ConfigurationError, InputError

logger = logging.getLogger(__name__)

FAMILIES = ('fixed_gap', 'switching', 'contextual', 'periodic', 'drifting_scale')

LossRanges = namedtuple('LossRanges', ['delta', 'delta_ext', 'max_delta', 'sum_sq'])


# ----------------------------------------------------------------------
class LossModel():

    """ Base loss model.

    Parameters
    ----------
    M : int
        number of arms
    T : int
        horizon
    seed : int, optional
        seed of the model's own generator. Default `0`.
    noise : float, optional
        amplitude of a seeded uniform perturbation in [0, noise) added to
        every loss. Default `0.0`.
    """

    family = None

    def __init__(self, M, T, seed=0, noise=0.0):
        if int(M) < 1 or int(T) < 1:
            raise ConfigurationError(f'loss model needs M >= 1 and T >= 1, got M={M}, T={T}')
        if noise < 0:
            raise ConfigurationError(f'noise must be nonnegative, got {noise}')
        self.M = int(M)
        self.T = int(T)
        self.seed = int(seed)
        self.noise = float(noise)
        self.affine = ()
        self._matrix = None
        self._contexts = None

    def __repr__(self):
        return f'{type(self).__name__}(M={self.M}, T={self.T}, seed={self.seed})'

    def _generate(self, rng):
        """ Base T x M losses and the context stream (or None) """
        raise NotImplementedError

    def _build(self):
        rng = np.random.default_rng(self.seed)
        base, contexts = self._generate(rng)
        base = np.asarray(base, dtype=float)
        assert base.shape == (self.T, self.M), f'{self!r} generated shape {base.shape}'
        if self.noise > 0:
            base = base + self.noise * rng.random((self.T, self.M))
        for a, b in self.affine:
            base = a * base + b
        self._matrix = base
        self._contexts = contexts

    @property
    def matrix(self):
        if self._matrix is None:
            self._build()
        return self._matrix

    @property
    def contexts(self):
        if self._matrix is None:
            self._build()
        return self._contexts

    def losses_at(self, t):

        """ Loss vector of round t (1-based) and its context, None without one """

        if not 1 <= t <= self.T:
            raise InputError(f'round {t} outside 1..{self.T}')
        ctx = None if self.contexts is None else int(self.contexts[t - 1])
        return self.matrix[t - 1].copy(), ctx

    def context_at(self, t):
        return self.losses_at(t)[1]

    def with_affine(self, a, b):

        """ Copy whose losses are a * l + b, applied after the existing maps """

        if not a > 0:
            raise ConfigurationError(f'affine scale must be positive, got {a}')
        other = copy.copy(self)
        other.affine = self.affine + ((float(a), float(b)),)
        other._matrix = None
        other._contexts = None
        return other

    def ranges(self):

        """ Per-round ranges and the extended two-round ranges (l_0 := l_1) """

        l = self.matrix
        prev = np.vstack([l[:1], l[:-1]])
        delta = l.max(axis=1) - l.min(axis=1)
        delta_ext = np.maximum(l, prev).max(axis=1) - np.minimum(l, prev).min(axis=1)
        return LossRanges(delta, delta_ext, float(delta.max()), float(np.dot(delta, delta)))

    def best_fixed_arm(self):
        return int(np.argmin(self.matrix.sum(axis=0)))

    def to_csv(self, path):

        """ Long-format export, columns t, m, loss """

        t, m = np.meshgrid(np.arange(1, self.T + 1), np.arange(self.M), indexing='ij')
        rows = np.column_stack([t.ravel(), m.ravel(), self.matrix.ravel()])
        np.savetxt(path, rows, fmt=['%d', '%d', '%.12g'], delimiter=',',
                   header='t,m,loss', comments='')


# ----------------------------------------------------------------------
def _gap_rows(M, best, gap):
    """ Losses 0 on the best arm of each round, gap elsewhere """
    rows = np.full((len(best), M), float(gap))
    rows[np.arange(len(best)), best] = 0.0
    return rows


class FixedGapModel(LossModel):

    family = 'fixed_gap'

    def __init__(self, M, T, gap=1.0, best=0, seed=0, noise=0.0):
        super().__init__(M, T, seed, noise)
        if not 0 <= best < self.M:
            raise ConfigurationError(f'best arm {best} outside 0..{self.M - 1}')
        self.gap = float(gap)
        self.best = int(best)

    def _generate(self, rng):
        return _gap_rows(self.M, np.full(self.T, self.best), self.gap), None


class SwitchingModel(LossModel):

    """ Best arm changes at each switch time; segment k is led by arm k mod M.

    Without explicit ``switch_times`` the S switches are spread evenly:
    segment k starts at round 1 + floor(k T / (S + 1)).
    """

    family = 'switching'

    def __init__(self, M, T, gap=1.0, switches=1, switch_times=None, seed=0, noise=0.0):
        super().__init__(M, T, seed, noise)
        if switch_times is None:
            switch_times = [1 + (k * self.T) // (int(switches) + 1)
                            for k in range(1, int(switches) + 1)]
        switch_times = [int(s) for s in switch_times]
        if any(not 2 <= s <= self.T for s in switch_times) or switch_times != sorted(set(switch_times)):
            raise ConfigurationError(
                f'switch times must be strictly increasing rounds in 2..{self.T}, got {switch_times}')
        self.gap = float(gap)
        self.switch_times = switch_times

    def _generate(self, rng):
        t = np.arange(1, self.T + 1)
        segment = np.searchsorted(self.switch_times, t, side='right')
        return _gap_rows(self.M, segment % self.M, self.gap), None


class ContextualModel(LossModel):

    """ Cyclic context stream c_t = (t - 1) mod N, best arm mapping[c_t] """

    family = 'contextual'

    def __init__(self, M, T, N=2, gap=1.0, mapping=None, seed=0, noise=0.0):
        super().__init__(M, T, seed, noise)
        if int(N) < 1:
            raise ConfigurationError(f'contextual model needs N >= 1, got {N}')
        self.N = int(N)
        if mapping is None:
            mapping = [c % self.M for c in range(self.N)]
        mapping = [int(a) for a in mapping]
        if len(mapping) != self.N or any(not 0 <= a < self.M for a in mapping):
            raise ConfigurationError(f'mapping {mapping} must give an arm in 0..{self.M - 1} '
                                     f'for each of {self.N} contexts')
        self.gap = float(gap)
        self.mapping = mapping

    def _generate(self, rng):
        contexts = np.arange(self.T) % self.N
        return _gap_rows(self.M, np.asarray(self.mapping)[contexts], self.gap), contexts


class PeriodicModel(LossModel):

    """ Best arm follows ``pattern`` with phase (t - 1) mod len(pattern) """

    family = 'periodic'

    def __init__(self, M, T, gap=1.0, pattern=None, seed=0, noise=0.0):
        super().__init__(M, T, seed, noise)
        if pattern is None:
            pattern = list(range(min(self.M, 2)))
        pattern = [int(a) for a in pattern]
        if not pattern or any(not 0 <= a < self.M for a in pattern):
            raise ConfigurationError(f'pattern {pattern} must be arms in 0..{self.M - 1}')
        self.gap = float(gap)
        self.pattern = pattern

    def _generate(self, rng):
        phase = np.arange(self.T) % len(self.pattern)
        return _gap_rows(self.M, np.asarray(self.pattern)[phase], self.gap), None


class DriftingScaleModel(LossModel):

    """ Uniform base losses, arm 0 favored by ``gap``, scaled by a linear ramp """

    family = 'drifting_scale'

    def __init__(self, M, T, gap=0.5, ramp=(1.0, 10.0), seed=0, noise=0.0):
        super().__init__(M, T, seed, noise)
        ramp = tuple(float(r) for r in ramp)
        if len(ramp) != 2 or min(ramp) <= 0:
            raise ConfigurationError(f'ramp must be two positive scales, got {ramp}')
        self.gap = float(gap)
        self.ramp = ramp

    def _generate(self, rng):
        base = rng.random((self.T, self.M))
        base[:, 1:] += self.gap
        scale = np.linspace(self.ramp[0], self.ramp[1], self.T)
        return base * scale[:, None], None


_MODELS = {
    'fixed_gap': FixedGapModel,
    'switching': SwitchingModel,
    'contextual': ContextualModel,
    'periodic': PeriodicModel,
    'drifting_scale': DriftingScaleModel,
}


# ----------------------------------------------------------------------
def make_environment(family, M, T, affine=(1.0, 0.0), **params):

    """ Construct a loss model by family name, wrapped with the affine map (a, b) """

    if family not in _MODELS:
        raise ConfigurationError(f'unknown environment family "{family}", expected one of {FAMILIES}')
    model = _MODELS[family](M, T, **params)
    a, b = affine
    if (a, b) != (1.0, 0.0):
        model = model.with_affine(a, b)
    logger.debug('built %r with affine %s', model, model.affine)
    return model
