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

""" Exponential weighting over equivalence classes of comparator sequences.

Adversarial online learning against fixed, switching, contextual and
periodic comparators with full or bandit feedback.
"""

try:
    from .version import version
except ImportError:
    # source tree, version.py is configured by cmake
    version = "unknown"

from .errors import (ComparatorBanditsError, ConfigurationError, InputError, NumericalCollapseError,
                     AssumptionViolation, NotRepresentableError, OracleOverflowError)
from .kernels import (ClassState, ComparatorPath, Kernel, FixedKernel, SwitchingKernel,
                      ContextualKernel, PeriodicKernel, make_kernel, region_count, complexity)
from .engine import (WeightTable, ZTable, ArmDistribution, SelectionEngine, init_table, arm_weights,
                     normalize_mix, sample_arm, exponential_update, transition)
from .schedules import Mode, Schedule, ScheduleState
from .environments import LossModel, make_environment
from .comparators import ComparatorSpec
from .ledger import RegretLedger, expected_regret
from .bounds import BoundReport, bound_rhs, make_report
from .oracle import brute_force_oracle
from .harness import Episode, run_episode
from .config import RunConfig, parse_config

__all__ = ['version',
           'ComparatorBanditsError', 'ConfigurationError', 'InputError', 'NumericalCollapseError',
           'AssumptionViolation', 'NotRepresentableError', 'OracleOverflowError',
           'ClassState', 'ComparatorPath', 'Kernel', 'FixedKernel', 'SwitchingKernel',
           'ContextualKernel', 'PeriodicKernel', 'make_kernel', 'region_count', 'complexity',
           'WeightTable', 'ZTable', 'ArmDistribution', 'SelectionEngine', 'init_table', 'arm_weights',
           'normalize_mix', 'sample_arm', 'exponential_update', 'transition',
           'Mode', 'Schedule', 'ScheduleState', 'LossModel', 'make_environment', 'ComparatorSpec',
           'RegretLedger', 'expected_regret', 'BoundReport', 'bound_rhs', 'make_report',
           'brute_force_oracle', 'Episode', 'run_episode', 'RunConfig', 'parse_config']
