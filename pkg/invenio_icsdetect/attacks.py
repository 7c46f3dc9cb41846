# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Response and measurement injection attacks.

An attack script is a list of directives. Each directive covers a frame
interval and forces valve M102 open; the stealth variant also spoofs the
valve position reported to the HMI as closed.
"""

import json
from collections import namedtuple
from enum import Enum

import numpy as np

from .errors import InvalidConfigurationError

NORMAL = 'normal'
"""Label of frames without attack."""

CANONICAL_FRAMES = 7200
"""Minimum trace length of the canonical scenario (one hour at 2 Hz)."""


class AttackId(Enum):
    """Implemented attack scenarios; the value is the frame label."""

    OPEN_VALVE = 'attack-1'
    STEALTH_VALVE = 'attack-2'


class AttackDirective(namedtuple('AttackDirective', [
        'attack_id', 'start_frame', 'end_frame', 'force_valve_open',
        'spoof_valve_closed'])):
    """Actuator override over ``[start_frame, end_frame)``.

    ``end_frame`` is ``None`` for an attack lasting until the end of the
    trace.
    """

    __slots__ = ()

    @classmethod
    def open_valve(cls, start_frame, end_frame=None):
        """Open the valve while the HMI shows it open."""
        return cls(AttackId.OPEN_VALVE, start_frame, end_frame, True, False)

    @classmethod
    def stealth_valve(cls, start_frame, end_frame=None):
        """Open the valve while the HMI shows it closed."""
        return cls(AttackId.STEALTH_VALVE, start_frame, end_frame, True, True)

    @property
    def label(self):
        """Frame label of this directive."""
        return self.attack_id.value

    def covers(self, index):
        """Return True if frame ``index`` lies in the directive interval."""
        return self.start_frame <= index and (
            self.end_frame is None or index < self.end_frame)

    def stop(self, n_frames):
        """Exclusive end frame within a trace of ``n_frames``."""
        if self.end_frame is None:
            return n_frames
        return min(self.end_frame, n_frames)

    def validate(self):
        """Check interval and flag invariants."""
        if self.start_frame < 0 or (
                self.end_frame is not None
                and self.end_frame <= self.start_frame):
            raise InvalidConfigurationError(
                'invalid attack interval [{0}, {1})'.format(
                    self.start_frame, self.end_frame))
        spoof = self.attack_id is AttackId.STEALTH_VALVE
        if not self.force_valve_open or self.spoof_valve_closed != spoof:
            raise InvalidConfigurationError(
                'flags of {0} do not match the attack'.format(self.label))
        return self

    def to_dict(self):
        """Serialize the directive."""
        return {
            'attack_id': self.label,
            'start_frame': self.start_frame,
            'end_frame': self.end_frame,
            'force_valve_open': self.force_valve_open,
            'spoof_valve_closed': self.spoof_valve_closed,
        }

    @classmethod
    def from_dict(cls, data):
        """Deserialize a directive."""
        try:
            attack_id = AttackId(data['attack_id'])
            return cls(attack_id, int(data['start_frame']),
                       None if data.get('end_frame') is None
                       else int(data['end_frame']),
                       bool(data['force_valve_open']),
                       bool(data['spoof_valve_closed'])).validate()
        except InvalidConfigurationError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidConfigurationError(
                'invalid attack directive {0!r}: {1}'.format(data, e))


class AttackScript(object):
    """Ordered, non-overlapping attack directives."""

    def __init__(self, directives=(), min_frames=0):
        """Initialize the script.

        :param directives: Iterable of :class:`AttackDirective`.
        :param min_frames: Shortest trace the script may be applied to.
        """
        self.directives = tuple(sorted(
            (d.validate() for d in directives),
            key=lambda d: d.start_frame))
        self.min_frames = min_frames
        for first, second in zip(self.directives, self.directives[1:]):
            if first.end_frame is None \
                    or first.end_frame > second.start_frame:
                raise InvalidConfigurationError(
                    'attack directives {0} and {1} overlap'.format(
                        first.label, second.label))

    def __iter__(self):
        """Iterate over the directives."""
        return iter(self.directives)

    def __len__(self):
        """Number of directives."""
        return len(self.directives)

    def __eq__(self, other):
        """Compare scripts by directives."""
        return isinstance(other, AttackScript) and \
            self.directives == other.directives and \
            self.min_frames == other.min_frames

    def __ne__(self, other):
        """Negation of ``__eq__``."""
        return not self == other

    __hash__ = None

    def directive_at(self, index):
        """Directive covering frame ``index`` or ``None``."""
        for directive in self.directives:
            if directive.covers(index):
                return directive
        return None

    def check_bounds(self, n_frames):
        """Validate the directive intervals against a trace length."""
        if n_frames < self.min_frames:
            raise InvalidConfigurationError(
                'attack script needs at least {0} frames, trace has '
                '{1}'.format(self.min_frames, n_frames))
        for directive in self.directives:
            if directive.start_frame >= n_frames or (
                    directive.end_frame is not None
                    and directive.end_frame > n_frames):
                raise InvalidConfigurationError(
                    '{0} interval [{1}, {2}) exceeds the trace of {3} '
                    'frames'.format(directive.label, directive.start_frame,
                                    directive.end_frame, n_frames))

    def labels(self, n_frames):
        """Ground-truth label of every frame of a trace."""
        labels = np.full(n_frames, NORMAL, dtype=object)
        for directive in self.directives:
            labels[directive.start_frame:directive.stop(n_frames)] = \
                directive.label
        return labels

    def to_dict(self):
        """Serialize the script."""
        return {
            'directives': [d.to_dict() for d in self.directives],
            'min_frames': self.min_frames,
        }

    @classmethod
    def from_dict(cls, data):
        """Deserialize a script."""
        return cls(
            (AttackDirective.from_dict(d) for d in data.get('directives', [])),
            min_frames=int(data.get('min_frames', 0)))

    def to_json(self):
        """Serialize the script as JSON document."""
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        """Deserialize a script from a JSON document."""
        try:
            data = json.loads(text)
        except ValueError as e:
            raise InvalidConfigurationError(
                'attack script is not valid JSON: {0}'.format(e))
        return cls.from_dict(data)


def apply(directive, state, frame, index):
    """Apply a directive to a state and the frame read from it.

    :param directive: An :class:`AttackDirective`.
    :param state: The :class:`~invenio_icsdetect.process.ProcessState`.
    :param frame: The :class:`~invenio_icsdetect.process.SensorFrame`.
    :param index: Frame index.
    :returns: Tuple ``(state, frame)``; unchanged outside the interval.
    """
    if not directive.covers(index):
        return state, frame
    if directive.force_valve_open:
        state = state._replace(valve_open=True)
    reported = False if directive.spoof_valve_closed else state.valve_open
    return state, frame._replace(valve_reported=bool(reported))


def canonical_scenario():
    """Open valve over frames 4200-4800, stealth valve from 6500 on."""
    return AttackScript([
        AttackDirective.open_valve(4200, 4800),
        AttackDirective.stealth_valve(6500),
    ], min_frames=CANONICAL_FRAMES)


def label_intervals(labels):
    """Find maximal runs of identical non-normal labels.

    :param labels: Sequence of frame labels.
    :returns: List of ``(label, start, stop)`` with exclusive ``stop``.
    """
    labels = np.asarray(labels, dtype=object)
    intervals = []
    start = None
    for index, label in enumerate(labels):
        if start is not None and label != labels[start]:
            intervals.append((labels[start], start, index))
            start = None
        if start is None and label != NORMAL:
            start = index
    if start is not None:
        intervals.append((labels[start], start, len(labels)))
    return intervals
