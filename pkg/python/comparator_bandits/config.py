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

""" Run-config files: configobj INI validated against ``configspec.ini``.

Minimal example::

    [kernel]
    family = fixed
    M = 4

    [environment]
    family = fixed_gap

    [run]
    T = 1000
    seeds = 0, 1, 2

All problems, schema and semantic, are collected into one
ConfigurationError.
"""

import copy
import logging
import os

from configobj import ConfigObj, ConfigObjError, flatten_errors, get_extra_values
from validate import Validator

from .comparators import ComparatorSpec, best_fixed_comparator
from .environments import make_environment
from .errors import ConfigurationError, NotRepresentableError
from .kernels import make_kernel

logger = logging.getLogger(__name__)

CONFIGSPEC = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'configspec.ini')

# Environment keys used by each family, next to seed and noise
_ENV_KEYS = {
    'fixed_gap': ('gap', 'best'),
    'switching': ('gap', 'switches', 'switch_times'),
    'contextual': ('N', 'gap', 'mapping'),
    'periodic': ('gap', 'pattern'),
    'drifting_scale': ('gap', 'ramp'),
}

_COMPARATOR_VALUE = {
    'fixed': 'arm',
    'sequence': 'arms',
    'schedule': 'schedule',
    'mapping': 'mapping',
    'period': 'period_mapping',
}

SWEEP_AXES = ('T', 'M', 'W', 'gap')

MIN_AUTO_BUDGET = 1.0


# ----------------------------------------------------------------------
def _schema_errors(cfg, result):
    messages = []
    for sections, key, error in flatten_errors(cfg, result):
        where = '/'.join(sections + ([key] if key else []))
        if error is False:
            messages.append(f'{where}: missing value or section')
        else:
            messages.append(f'{where}: {error}')
    for sections, name in get_extra_values(cfg):
        messages.append(f"{'/'.join(sections + (name,))}: unknown key or section")
    return messages


# ----------------------------------------------------------------------
class RunConfig():

    """ Validated run configuration.

    Holds plain data only, so it can be shipped to worker processes. Use
    ``parse_config`` to read one from a file.
    """

    def __init__(self, sections):
        self.sections = copy.deepcopy(sections)
        k, s, e, r = (self.sections[name] for name in ('kernel', 'schedule', 'environment', 'run'))

        self.family = k['family']
        self.M = k['M']
        self.mode = s['mode']
        self.eta_cap = s['eta_cap']
        self.bandit_origin = s['bandit_origin']
        self.T = r['T']
        self.seeds = list(r['seeds'])
        self.output = r['output']
        self.strict_assumptions = r['strict_assumptions']
        self.sweep_axis = self.sections['sweep']['axis']
        self.sweep_values = list(self.sections['sweep']['values'])
        self.environment_family = e['family']

        self.comparator_specs = []
        messages = []
        for name, c in self.sections['comparators'].items():
            value = c.get(_COMPARATOR_VALUE[c['kind']])
            try:
                self.comparator_specs.append(ComparatorSpec(name, c['kind'], value))
            except ConfigurationError as err:
                messages += err.messages

        messages += self._check()
        if messages:
            raise ConfigurationError(messages)

        self.complexities, self.W_budget = self._resolve_budget(s['W_budget'])

    def __repr__(self):
        return (f'RunConfig(kernel={self.family}, M={self.M}, mode={self.mode}, '
                f'environment={self.environment_family}, T={self.T}, seeds={self.seeds})')

    # -- semantic checks

    def _check(self):
        k, e, s = self.sections['kernel'], self.sections['environment'], self.sections['schedule']
        messages = []
        if e['M'] is not None and e['M'] != k['M']:
            messages.append(f"environment has M={e['M']} arms, kernel M={k['M']}")
        if k['family'] == 'contextual':
            if k['N'] is None:
                messages.append('kernel/N: required by the contextual kernel')
            if e['family'] != 'contextual':
                messages.append('contextual kernel needs a contextual environment')
            elif k['N'] is not None and (e['N'] or k['N']) > k['N']:
                messages.append(f"environment has N={e['N']} contexts, kernel N={k['N']}")
        if k['family'] == 'periodic' and k['tau_B'] is None:
            messages.append('kernel/tau_B: required by the periodic kernel')
        if not s['eta_cap'] > 0:
            messages.append(f"schedule/eta_cap: must be positive, got {s['eta_cap']}")
        if s['W_budget'] != 'auto':
            try:
                if not float(s['W_budget']) > 0:
                    messages.append(f"schedule/W_budget: must be positive, got {s['W_budget']}")
            except ValueError:
                messages.append(f"schedule/W_budget: expected a number or auto, got {s['W_budget']!r}")
        if e['affine_a'] <= 0:
            messages.append(f"environment/affine_a: must be positive, got {e['affine_a']}")
        return messages

    def _resolve_budget(self, W_spec):
        try:
            kernel, model = self.make_kernel(), self.make_model()
        except ConfigurationError as err:
            raise ConfigurationError(err.messages)

        complexities, missing = {}, []
        for spec in self.comparators(model):
            try:
                complexities[spec.name] = spec.complexity(kernel, model)
            except NotRepresentableError as err:
                missing += err.messages
            except ConfigurationError as err:
                raise ConfigurationError(err.messages)
        if missing:
            raise NotRepresentableError(missing)

        if W_spec == 'auto':
            # a single-class kernel gives W = 0, the schedules need W > 0
            return complexities, max(max(complexities.values()), MIN_AUTO_BUDGET)
        W = float(W_spec)
        for name, c in complexities.items():
            if c > W:
                logger.warning('comparator %s has complexity %.6g above W_budget %.6g', name, c, W)
        return complexities, W

    # -- builders

    def make_kernel(self):
        k = self.sections['kernel']
        return make_kernel(k['family'], k['M'], k['N'], k['tau_B'], k['renormalize_rows'])

    def make_model(self):
        e, k = self.sections['environment'], self.sections['kernel']
        params = {key: e[key] for key in _ENV_KEYS[e['family']] if e[key] is not None}
        if e['family'] == 'contextual' and 'N' not in params:
            params['N'] = k['N'] if k['N'] is not None else 2
        return make_environment(e['family'], k['M'], self.T,
                                affine=(e['affine_a'], e['affine_b']),
                                seed=e['seed'], noise=e['noise'], **params)

    def comparators(self, model):
        """ Declared comparators, or the best fixed arm in hindsight """
        return list(self.comparator_specs) or [best_fixed_comparator(model)]

    # -- derived configurations

    def replace(self, **overrides):

        """ Copy with run-level overrides: seeds, output, strict_assumptions """

        other = copy.copy(self)
        for key, value in overrides.items():
            assert key in ('seeds', 'output', 'strict_assumptions'), f'cannot override {key}'
            setattr(other, key, value)
        return other

    def with_axis(self, axis, value):

        """ Re-validated copy with one sweep axis set to ``value`` """

        if axis not in SWEEP_AXES:
            raise ConfigurationError(f'unknown sweep axis "{axis}", expected one of {SWEEP_AXES}')
        sections = copy.deepcopy(self.sections)
        if axis == 'T':
            sections['run']['T'] = int(value)
        elif axis == 'M':
            sections['kernel']['M'] = int(value)
            sections['environment']['M'] = None
        elif axis == 'W':
            sections['schedule']['W_budget'] = repr(float(value))
        else:
            sections['environment']['gap'] = float(value)
        other = RunConfig(sections)
        return other.replace(seeds=self.seeds, output=self.output,
                             strict_assumptions=self.strict_assumptions)


# ----------------------------------------------------------------------
def parse_config(infile):

    """ Parse and validate a run-config.

    Parameters
    ----------
    infile : str or list of str
        path of the INI file, or its lines

    Returns
    -------
    RunConfig
    """

    if isinstance(infile, str) and not os.path.isfile(infile):
        raise ConfigurationError(f'config file {infile} not found')
    try:
        cfg = ConfigObj(infile, configspec=CONFIGSPEC, file_error=True)
    except (ConfigObjError, IOError) as err:
        raise ConfigurationError(f'cannot read config: {err}')

    result = cfg.validate(Validator(), preserve_errors=True)
    if result is not True:
        raise ConfigurationError(_schema_errors(cfg, result))
    extra = _schema_errors(cfg, True)
    if extra:
        raise ConfigurationError(extra)

    return RunConfig(cfg.dict())
