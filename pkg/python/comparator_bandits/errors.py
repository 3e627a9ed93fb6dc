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

""" Exceptions raised by comparator_bandits """


class ComparatorBanditsError(Exception):
    """ Base class of every error raised by this package """


class ConfigurationError(ComparatorBanditsError):
    """ Invalid kernel, environment or run configuration.

    All problems found while validating are collected in ``messages`` so a
    run-config can be fixed in one pass.
    """

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__('; '.join(self.messages))


class InputError(ComparatorBanditsError):
    """ Missing or out-of-range side information or round index """


class NumericalCollapseError(ComparatorBanditsError):
    """ Every arm weight underflowed to zero """


class AssumptionViolation(ComparatorBanditsError):
    """ A runtime audit of the learning-rate / performance-measure contract failed """

    def __init__(self, assumption, t, value=None):
        # unpickling calls cls(*args), so args hold every constructor argument
        super().__init__(assumption, t, value)
        self.assumption = assumption
        self.t = t
        self.value = value

    def __str__(self):
        msg = f'assumption "{self.assumption}" violated at round {self.t}'
        if self.value is not None:
            msg += f' (value {self.value!r})'
        return msg


class NotRepresentableError(ConfigurationError):
    """ Comparator has zero prior weight (infinite complexity) under the kernel """


class OracleOverflowError(ComparatorBanditsError):
    """ Path enumeration would exceed the oracle's path cap """
