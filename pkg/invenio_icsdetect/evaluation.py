# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Thresholds, flagged intervals and detection reports."""

import json
import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from .attacks import NORMAL, label_intervals
from .errors import (InsufficientCalibrationError, InvalidConfigurationError,
                     NoPeriodicityError)
from .profiles import estimate_period, top_peaks

logger = logging.getLogger(__name__)

MIN_CALIBRATION_WINDOWS = 10
"""Calibration spans must hold at least this many detector windows."""


class ThresholdMethod(Enum):
    """How a cutoff is derived from calibration scores."""

    MEAN_PLUS_K_STD = 'mean+kstd'
    QUANTILE = 'quantile'
    FIXED = 'fixed'


class Threshold(namedtuple('Threshold', ['method', 'parameter',
                                         'calibration_span'])):
    """Calibration method, its parameter and the attack-free span.

    ``calibration_span`` is a ``(start, stop)`` frame range or ``None`` for
    the whole series.
    """

    __slots__ = ()

    @classmethod
    def create(cls, method='mean+kstd', k=4.0, quantile=0.999, value=None,
               calibration_span=None):
        """Build a threshold, picking the parameter of ``method``."""
        try:
            method = ThresholdMethod(method)
        except ValueError:
            raise InvalidConfigurationError(
                'unknown threshold method {0!r}'.format(method))
        if method is ThresholdMethod.MEAN_PLUS_K_STD:
            parameter = k
        elif method is ThresholdMethod.QUANTILE:
            parameter = quantile
            if not 0 < quantile <= 1:
                raise InvalidConfigurationError(
                    'quantile must be within (0, 1]')
        else:
            if value is None:
                raise InvalidConfigurationError(
                    'a fixed threshold needs a value')
            parameter = value
        return cls(method, float(parameter), calibration_span)

    def to_dict(self):
        """Serialize the threshold."""
        return {
            'calibration_span': None if self.calibration_span is None
            else list(self.calibration_span),
            'method': self.method.value,
            'parameter': self.parameter,
        }


def calibrate(scores, threshold, labels=None, window=1):
    """Derive a cutoff from attack-free scores.

    :param scores: Score series.
    :param threshold: A :class:`Threshold`.
    :param labels: Optional frame labels used to verify the span.
    :param window: Detector window; the span must hold ten of them.
    :raises InsufficientCalibrationError: If the span is too short,
        contains attacks or undefined scores.
    :returns: The cutoff.
    """
    if threshold.method is ThresholdMethod.FIXED:
        return float(threshold.parameter)
    scores = np.asarray(scores, dtype=float)
    start, stop = threshold.calibration_span or (0, len(scores))
    start, stop = max(0, int(start)), min(len(scores), int(stop))
    if stop - start < MIN_CALIBRATION_WINDOWS * window:
        raise InsufficientCalibrationError(
            'calibration span [{0}, {1}) is shorter than {2} windows of {3} '
            'frames'.format(start, stop, MIN_CALIBRATION_WINDOWS, window))
    if labels is not None and np.any(
            np.asarray(labels, dtype=object)[start:stop] != NORMAL):
        raise InsufficientCalibrationError(
            'calibration span [{0}, {1}) contains attack frames'.format(
                start, stop))
    values = scores[start:stop]
    if not np.all(np.isfinite(values)):
        raise InsufficientCalibrationError(
            'calibration span contains undefined scores')
    if threshold.method is ThresholdMethod.QUANTILE:
        # Nearest rank: smallest value with at least q of the span below.
        return float(np.quantile(values, threshold.parameter,
                                 method='inverted_cdf'))
    return float(values.mean() + threshold.parameter * values.std())


def flag(scores, cutoff, min_duration=1, gap_merge=0):
    """Turn scores into flagged intervals.

    Runs of scores strictly above ``cutoff`` separated by fewer than
    ``gap_merge`` frames are merged; merged runs shorter than
    ``min_duration`` frames are dropped.

    :returns: Sorted list of disjoint ``(start, stop)`` intervals.
    """
    if min_duration < 1:
        raise InvalidConfigurationError('minimum duration must be >= 1')
    above = np.asarray(scores, dtype=float) > cutoff
    edges = np.diff(np.concatenate([[0], above.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)

    merged = []
    for start, stop in zip(starts, stops):
        if merged and start - merged[-1][1] < gap_merge:
            merged[-1][1] = stop
        else:
            merged.append([start, stop])
    return [(int(start), int(stop)) for start, stop in merged
            if stop - start >= min_duration]


AttackMatch = namedtuple('AttackMatch', ['attack_id', 'start', 'stop',
                                         'latency'])
"""One ground-truth attack; ``latency`` is ``None`` when missed."""


class DetectionReport(object):
    """Flagged intervals matched against ground truth."""

    def __init__(self, flagged, matches, false_alarms, settings=None):
        """Initialize the report.

        :param flagged: Flagged ``(start, stop)`` intervals.
        :param matches: List of :class:`AttackMatch`.
        :param false_alarms: Flagged intervals matching no attack.
        :param settings: Detector and threshold settings to record.
        """
        self.flagged = list(flagged)
        self.matches = list(matches)
        self.false_alarms = list(false_alarms)
        self.settings = dict(settings or {})

    @property
    def detected(self):
        """Matches with a latency."""
        return [m for m in self.matches if m.latency is not None]

    @property
    def precision(self):
        """Share of flagged intervals matching an attack."""
        if not self.flagged:
            return None
        return 1.0 - len(self.false_alarms) / float(len(self.flagged))

    @property
    def recall(self):
        """Share of attacks detected."""
        if not self.matches:
            return None
        return len(self.detected) / float(len(self.matches))

    def to_dict(self):
        """Serialize the report."""
        return {
            'attacks': [{
                'attack_id': m.attack_id,
                'detected': m.latency is not None,
                'interval': [m.start, m.stop],
                'latency': m.latency,
            } for m in self.matches],
            'false_alarms': [list(i) for i in self.false_alarms],
            'flagged_intervals': [list(i) for i in self.flagged],
            'settings': self.settings,
            'summary': {
                'attacks': len(self.matches),
                'detected': len(self.detected),
                'false_alarms': len(self.false_alarms),
                'flagged': len(self.flagged),
                'precision': self.precision,
                'recall': self.recall,
            },
        }

    def to_json(self):
        """Serialize the report as stable JSON text."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'

    def to_table(self):
        """Human-readable summary."""
        def _ratio(value):
            return 'n/a' if value is None else '{0:.3f}'.format(value)

        lines = []
        title = 'Detector: {0}'.format(self.settings.get('detector', '?'))
        lines.extend([title, '=' * len(title)])
        for key in sorted(self.settings):
            if key != 'detector':
                lines.append('{0:<16} {1}'.format(key, self.settings[key]))
        lines.append('')
        lines.append('{0:<10} {1:>8} {2:>8} {3:>10}'.format(
            'attack', 'start', 'stop', 'latency'))
        for match in self.matches:
            lines.append('{0:<10} {1:>8} {2:>8} {3:>10}'.format(
                match.attack_id, match.start, match.stop,
                'missed' if match.latency is None else match.latency))
        lines.append('')
        lines.append('flagged intervals: {0}'.format(
            ' '.join('[{0}, {1})'.format(*i) for i in self.flagged)
            or 'none'))
        lines.append('false alarms:      {0}'.format(len(self.false_alarms)))
        lines.append('precision:         {0}'.format(
            _ratio(self.precision)))
        lines.append('recall:            {0}'.format(_ratio(self.recall)))
        return '\n'.join(lines) + '\n'


def evaluate(flagged, labels, transition_margin=0, settings=None):
    """Match flagged intervals against labeled attacks.

    An attack counts as detected if a flagged interval intersects the attack
    widened by ``transition_margin`` frames on both sides. Its latency is
    the first flagged frame inside the widened interval minus the attack
    start.

    :param flagged: Flagged ``(start, stop)`` intervals.
    :param labels: Frame labels aligned with the scores.
    :param transition_margin: Frames added around each attack.
    :param settings: Recorded in the report.
    :returns: A :class:`DetectionReport`.
    """
    attacks = label_intervals(labels)
    widened = [(start - transition_margin, stop + transition_margin)
               for _, start, stop in attacks]

    matches = []
    for (attack_id, start, stop), (low, high) in zip(attacks, widened):
        hits = [max(f_start, low) for f_start, f_stop in flagged
                if f_start < high and f_stop > low]
        latency = int(min(hits) - start) if hits else None
        matches.append(AttackMatch(attack_id, int(start), int(stop),
                                   latency))

    false_alarms = [
        (f_start, f_stop) for f_start, f_stop in flagged
        if not any(f_start < high and f_stop > low for low, high in widened)]

    report = DetectionReport(flagged, matches, false_alarms, settings)
    logger.info('%d of %d attacks detected, %d false alarms',
                len(report.detected), len(matches), len(false_alarms))
    return report


def attack_boundaries(labels):
    """Frames where the trace switches between normal and attack.

    An attack running to the last frame has no end boundary.

    :param labels: Frame labels.
    :returns: Sorted list of frame indices.
    """
    boundaries = set()
    for _, start, stop in label_intervals(labels):
        boundaries.add(int(start))
        if stop < len(labels):
            boundaries.add(int(stop))
    return sorted(boundaries)


def transition_peaks(scores, labels, separation):
    """Highest score peaks, one per attack boundary.

    :param scores: Score series.
    :param labels: Frame labels aligned with the scores.
    :param separation: Minimal distance between two peaks, usually the
        detector window.
    :returns: Peak frames sorted by position.
    """
    count = len(attack_boundaries(labels))
    if not count:
        return []
    return sorted(int(i) for i in top_peaks(scores, count, separation))


def error_periodicity(scores, sample_rate_hz, intervals, prominence=0.2):
    """Dominant period of a score series outside and inside attacks.

    The longest attack-free segment and the longest attack segment are
    analysed separately.

    :param scores: Score series.
    :param sample_rate_hz: Samples per second.
    :param intervals: Attack intervals as ``(label, start, stop)``.
    :returns: Dictionary with the periods in seconds, ``None`` where no
        period is found.
    """
    scores = np.asarray(scores, dtype=float)
    inside = np.zeros(len(scores), dtype=bool)
    for _, start, stop in intervals:
        inside[start:stop] = True

    def _longest(mask):
        best = (0, 0)
        edges = np.diff(np.concatenate([[0], mask.astype(np.int8), [0]]))
        for start, stop in zip(np.flatnonzero(edges == 1),
                               np.flatnonzero(edges == -1)):
            if stop - start > best[1] - best[0]:
                best = (start, stop)
        return scores[best[0]:best[1]]

    result = {}
    for key, mask in (('normal', ~inside), ('attack', inside)):
        segment = _longest(mask)
        if len(segment) < 8:
            result[key] = None
            continue
        try:
            result[key] = estimate_period(
                segment, sample_rate_hz, prominence=prominence).seconds
        except NoPeriodicityError:
            result[key] = None
    return result
