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

""" Declared comparators and their lift to class paths under a kernel """

import math

from .errors import ConfigurationError, NotRepresentableError
from .kernels import ComparatorPath, ContextualKernel, PeriodicKernel, complexity

KINDS = ('fixed', 'sequence', 'schedule', 'mapping', 'period')


# ----------------------------------------------------------------------
def parse_schedule(items):

    """ ['1:0', '500:2'] -> [(1, 0), (500, 2)], sorted by round """

    out = []
    for item in items:
        try:
            rnd, arm = str(item).split(':')
            out.append((int(rnd), int(arm)))
        except ValueError:
            raise ConfigurationError(f'schedule entry "{item}" is not of the form round:arm')
    out.sort()
    if not out or out[0][0] != 1:
        raise ConfigurationError(f'schedule {list(items)} must start at round 1')
    return out


# ----------------------------------------------------------------------
class ComparatorSpec():

    """ One declared comparator.

    Parameters
    ----------
    name : str
        identifier used in ledger columns and reports
    kind : str
        fixed, sequence, schedule, mapping or period
    value
        arm (fixed), arm list (sequence), 'round:arm' list (schedule),
        context -> arm list (mapping) or phase -> arm list (period)
    """

    def __init__(self, name, kind, value):
        if kind not in KINDS:
            raise ConfigurationError(f'comparator {name}: unknown kind "{kind}"')
        if value is None:
            raise ConfigurationError(f'comparator {name}: kind "{kind}" needs a value')
        self.name = str(name)
        self.kind = kind
        self.value = value

    def __repr__(self):
        return f'ComparatorSpec({self.name!r}, {self.kind!r}, {self.value!r})'

    def arm_sequence(self, model):

        """ Arm s_t of every round 1..T against ``model`` """

        T = model.T
        if self.kind == 'fixed':
            arms = [int(self.value)] * T
        elif self.kind == 'sequence':
            arms = [int(a) for a in self.value]
            if len(arms) != T:
                raise ConfigurationError(
                    f'comparator {self.name}: sequence has {len(arms)} entries for T={T}')
        elif self.kind == 'schedule':
            arms, entries = [], parse_schedule(self.value)
            for k, (start, arm) in enumerate(entries):
                stop = entries[k + 1][0] if k + 1 < len(entries) else T + 1
                arms += [arm] * max(0, min(stop, T + 1) - start)
        elif self.kind == 'mapping':
            if model.contexts is None:
                raise ConfigurationError(
                    f'comparator {self.name}: mapping needs a contextual environment')
            mapping = [int(a) for a in self.value]
            if max(model.contexts) >= len(mapping):
                raise ConfigurationError(
                    f'comparator {self.name}: mapping {mapping} misses contexts of the environment')
            arms = [mapping[c] for c in model.contexts]
        else:
            pattern = [int(a) for a in self.value]
            arms = [pattern[(t - 1) % len(pattern)] for t in range(1, T + 1)]

        if any(not 0 <= a < model.M for a in arms):
            raise ConfigurationError(f'comparator {self.name}: arm outside 0..{model.M - 1}')
        return arms

    def resolve(self, kernel, model):

        """ ComparatorPath of this comparator under ``kernel`` with its arm sequence """

        arms = self.arm_sequence(model)
        if self.kind == 'mapping' and isinstance(kernel, ContextualKernel) \
                and len(self.value) == kernel.N:
            path = kernel.lift_mapping(self.value, model.T)
        elif self.kind == 'period' and isinstance(kernel, PeriodicKernel) \
                and len(self.value) <= kernel.tau_B:
            path = kernel.lift_period(self.value, model.T)
        else:
            path = kernel.embed(arms, model.contexts)
        return ComparatorPath(path.states, arms)

    def complexity(self, kernel, model):
        W = complexity(kernel, self.resolve(kernel, model), model.T)
        if math.isinf(W):
            raise NotRepresentableError(
                f'comparator {self.name} ({self.kind}) not representable under {kernel!r}')
        return W


# ----------------------------------------------------------------------
def best_fixed_comparator(model):
    return ComparatorSpec('best_fixed', 'fixed', model.best_fixed_arm())
