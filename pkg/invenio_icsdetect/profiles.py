# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Matrix Profiles and anomaly scores derived from them.

The Matrix Profile of a series holds, for every subsequence of length ``m``,
the smallest z-normalized Euclidean distance to any other subsequence
outside its exclusion zone. A high value marks a subsequence without a
similar counterpart, i.e. a discord.

Two implementations are provided. :func:`mp_brute` normalizes every window
explicitly and serves as the reference; :func:`mp_fast` walks the distance
matrix row by row, updating sliding dot products incrementally from an FFT
computed first row.
"""

import logging
import math
from collections import namedtuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal

from .errors import (DegenerateWindowError, InvalidConfigurationError,
                     NoPeriodicityError, ShapeMismatchError)

logger = logging.getLogger(__name__)


class MpConfig(namedtuple('MpConfig', ['m', 'exclusion_radius',
                                       'std_epsilon'])):
    """Window length, exclusion radius and minimal window deviation."""

    __slots__ = ()

    @classmethod
    def for_series(cls, series, m, exclusion_radius=None,
                   relative_epsilon=1e-8):
        """Derive a configuration for a series.

        :param series: The series the profile will be computed on.
        :param m: Window length.
        :param exclusion_radius: Defaults to ``ceil(m / 2)``.
        :param relative_epsilon: Minimal deviation relative to the
            peak-to-peak range of the series.
        """
        m = int(m)
        if exclusion_radius is None:
            exclusion_radius = int(math.ceil(m / 2.0))
        full_scale = float(np.ptp(np.asarray(series, dtype=float))) or 1.0
        return cls(m, int(exclusion_radius), relative_epsilon * full_scale)

    def validate(self, n):
        """Check the configuration against a series of length ``n``."""
        if self.m < 2 or 2 * self.m > n:
            raise InvalidConfigurationError(
                'window size {0} must be within 2..{1} for {2} '
                'samples'.format(self.m, n // 2, n))
        if self.exclusion_radius < 1:
            raise InvalidConfigurationError(
                'exclusion radius must be at least 1')
        if n - self.m + 1 < 2 * self.exclusion_radius + 2:
            raise InvalidConfigurationError(
                'series of {0} samples leaves no neighbour outside an '
                'exclusion radius of {1}'.format(n, self.exclusion_radius))
        if not self.std_epsilon > 0:
            raise InvalidConfigurationError('std epsilon must be positive')
        return self


MatrixProfile = namedtuple('MatrixProfile', ['distances', 'neighbor_index',
                                             'config'])
"""Per-window minimal distances and nearest neighbour indices."""

Period = namedtuple('Period', ['lag', 'seconds', 'acf'])
"""Estimated period in samples and seconds with the ACF curve."""


def _prepare(series, config):
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise ShapeMismatchError('expected a single channel series')
    if not np.all(np.isfinite(x)):
        raise InvalidConfigurationError('series contains NaN or infinity')
    config.validate(len(x))
    return x


def _check_degenerate(sigma, config):
    bad = np.flatnonzero(sigma < config.std_epsilon)
    if len(bad):
        raise DegenerateWindowError(int(bad[0]), float(sigma[bad[0]]))


def _exclude(row, index, radius):
    row[max(0, index - radius):index + radius + 1] = np.inf


def mp_brute(series, config):
    """Compute the Matrix Profile by comparing normalized windows.

    :param series: One-dimensional series.
    :param config: An :class:`MpConfig`.
    :raises DegenerateWindowError: If a window is (almost) constant.
    :returns: A :class:`MatrixProfile`.
    """
    x = _prepare(series, config)
    windows = sliding_window_view(x, config.m)
    mu = windows.mean(axis=1)
    sigma = windows.std(axis=1)
    _check_degenerate(sigma, config)
    z = (windows - mu[:, np.newaxis]) / sigma[:, np.newaxis]

    p = len(z)
    distances = np.empty(p)
    neighbors = np.empty(p, dtype=np.int64)
    for i in range(p):
        row = np.sqrt(np.sum((z - z[i]) ** 2, axis=1))
        _exclude(row, i, config.exclusion_radius)
        j = int(np.argmin(row))
        distances[i] = row[j]
        neighbors[i] = j
    return MatrixProfile(distances, neighbors, config)


def mp_fast(series, config):
    """Compute the Matrix Profile with incremental sliding dot products.

    The first row of dot products comes from an FFT convolution; every
    following row is derived from its predecessor in linear time, giving
    ``O(n^2)`` overall.

    :param series: One-dimensional series.
    :param config: An :class:`MpConfig`.
    :raises DegenerateWindowError: If a window is (almost) constant.
    :returns: A :class:`MatrixProfile`.
    """
    x = _prepare(series, config)
    m = config.m
    # Centering keeps the dot products small; z-normalization ignores it.
    x = x - x.mean()
    windows = sliding_window_view(x, m)
    mu = windows.mean(axis=1)
    sigma = windows.std(axis=1)
    _check_degenerate(sigma, config)

    p = len(windows)
    first_row = signal.fftconvolve(x, x[m - 1::-1], mode='valid')
    qt = first_row.copy()
    bound = 2.0 * math.sqrt(m)
    distances = np.empty(p)
    neighbors = np.empty(p, dtype=np.int64)
    for i in range(p):
        if i > 0:
            qt[1:] = qt[:-1] - x[:p - 1] * x[i - 1] \
                + x[m:m + p - 1] * x[i + m - 1]
            qt[0] = first_row[i]
        corr = (qt - m * mu[i] * mu) / (m * sigma[i] * sigma)
        row = np.sqrt(np.clip(2.0 * m * (1.0 - corr), 0.0, bound ** 2))
        _exclude(row, i, config.exclusion_radius)
        j = int(np.argmin(row))
        distances[i] = row[j]
        neighbors[i] = j
    return MatrixProfile(distances, neighbors, config)


def autocorrelation(series, max_lag=None):
    """Biased autocorrelation normalized to 1 at lag zero.

    :param series: One-dimensional series.
    :param max_lag: Largest lag returned; all lags by default.
    :raises NoPeriodicityError: For a constant series.
    """
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    n = len(x)
    acf = signal.correlate(x, x, mode='full', method='fft')[n - 1:]
    if not acf[0] > 0:
        raise NoPeriodicityError('a constant series has no period')
    acf = acf / acf[0]
    if max_lag is not None:
        acf = acf[:max_lag + 1]
    return acf


def estimate_period(series, sample_rate_hz, prominence=0.2):
    """Find the first prominent autocorrelation maximum.

    Lags are searched up to a quarter of the series so that at least four
    periods support the estimate.

    :param series: One-dimensional series.
    :param sample_rate_hz: Samples per second.
    :param prominence: Minimal normalized autocorrelation of the maximum.
    :raises NoPeriodicityError: If no maximum exceeds ``prominence``.
    :returns: A :class:`Period`.
    """
    acf = autocorrelation(series)
    limit = len(acf) // 4
    peaks, _ = signal.find_peaks(acf[:limit + 1], height=prominence)
    if not len(peaks):
        raise NoPeriodicityError(
            'no autocorrelation maximum above {0} within {1} lags'.format(
                prominence, limit))
    lag = int(peaks[0])
    return Period(lag, lag / float(sample_rate_hz), acf[:limit + 1])


def choose_window(series, sample_rate_hz, prominence=0.2):
    """Window size equal to the dominant period of a series, in samples."""
    period = estimate_period(series, sample_rate_hz, prominence=prominence)
    m = int(round(period.seconds * sample_rate_hz))
    logger.info('autocorrelation period %.1f s, window size %d',
                period.seconds, m)
    return m


def window_max(distances, m):
    """Maximum over the windows ``[i - m + 1, i]`` covering each frame."""
    distances = np.asarray(distances, dtype=float)
    pad = np.full(m - 1, -np.inf)
    padded = np.concatenate([pad, distances, pad])
    return sliding_window_view(padded, m).max(axis=1)


def mp_score(profiles):
    """Per-frame anomaly score from per-channel profiles.

    Frame ``i`` takes the largest distance of all windows covering it, and
    the channels are combined by their maximum.

    :param profiles: List of :class:`MatrixProfile` of equal length and
        window size.
    :returns: Array with one score per frame of the series.
    """
    if not profiles:
        raise InvalidConfigurationError('no profiles to score')
    shapes = set((len(p.distances), p.config.m) for p in profiles)
    if len(shapes) != 1:
        raise ShapeMismatchError(
            'profiles differ in length or window size: {0}'.format(
                sorted(shapes)))
    return np.max([window_max(p.distances, p.config.m) for p in profiles],
                  axis=0)


def top_peaks(values, count, separation):
    """Rank the onsets of raised levels.

    An onset is an index where the series rises above its predecessor.
    Onsets are taken by decreasing value, skipping those closer than
    ``separation`` to an onset already taken.

    :param values: One-dimensional series.
    :param count: Maximal number of peaks.
    :param separation: Minimal distance between two peaks.
    :returns: Array of indices, highest first.
    """
    values = np.asarray(values, dtype=float)
    onsets = np.flatnonzero(values[1:] > values[:-1]) + 1
    order = onsets[np.argsort(-values[onsets], kind='stable')]
    chosen = []
    for index in order:
        if all(abs(index - other) > separation for other in chosen):
            chosen.append(int(index))
            if len(chosen) == count:
                break
    return np.array(chosen, dtype=np.int64)
