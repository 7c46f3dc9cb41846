# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Plot data files and optional SVG charts.

Results files hold one row per frame with the columns ``frame``, the
detector input channels, ``score``, ``cutoff`` and ``label``. Predicting
detectors add one ``pred_<channel>`` column per input channel, empty where
no prediction exists. Rendering requires the ``plot`` extra (matplotlib).
"""

import logging

import pandas as pd

from .attacks import label_intervals
from .errors import IoFailureError, SchemaMismatchError
from .traces import FLOAT_FORMAT

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ('frame', 'score', 'cutoff', 'label')
"""Columns every results file has besides the input channels."""

PREDICTION_PREFIX = 'pred_'
"""Prefix of the prediction column of a channel."""


def write_plot_data(path, channels, names, scores, cutoff, labels,
                    predictions=None):
    """Write a results file.

    :param path: Target CSV path.
    :param channels: Input channels ``(frames, k)``.
    :param names: Names of the ``k`` channels.
    :param scores: Score per frame.
    :param cutoff: Calibrated cutoff.
    :param labels: Ground-truth label per frame.
    :param predictions: Optional predicted channels ``(frames, k)``; NaN
        marks frames without prediction.
    """
    data = pd.DataFrame({'frame': range(len(scores))})
    for column, name in enumerate(names):
        data[name] = channels[:, column]
    if predictions is not None:
        for column, name in enumerate(names):
            data[PREDICTION_PREFIX + name] = predictions[:, column]
    data['score'] = scores
    data['cutoff'] = float(cutoff)
    data['label'] = list(labels)
    try:
        data.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                    lineterminator='\n')
    except (OSError, IOError) as e:
        raise IoFailureError('cannot write {0}: {1}'.format(path, e))


def read_results(path):
    """Read a results file.

    :returns: Tuple ``(data, channel_names)``; prediction columns are not
        counted as channels.
    """
    try:
        data = pd.read_csv(path, float_precision='round_trip')
    except (OSError, IOError) as e:
        raise IoFailureError('cannot read {0}: {1}'.format(path, e))
    except ValueError as e:
        raise SchemaMismatchError('cannot parse {0}: {1}'.format(path, e))
    missing = [c for c in RESULT_COLUMNS if c not in data.columns]
    if missing:
        raise SchemaMismatchError('{0} lacks column(s) {1}'.format(
            path, ', '.join(missing)))
    names = [c for c in data.columns if c not in RESULT_COLUMNS and
             not c.startswith(PREDICTION_PREFIX)]
    data['label'] = data['label'].astype(str)
    return data, names


def render_svg(path, data, names, title, sample_rate_hz=2.0):
    """Draw input channels above the score row.

    Attack intervals are shaded, predictions are drawn dashed over their
    channel and the cutoff is drawn as a dashed line. The active matplotlib
    backend is left unchanged. The output is byte-stable for identical
    input.

    :param path: Target SVG path.
    :param data: Results as returned by :func:`read_results`.
    :param names: Channel columns to draw.
    :param title: Figure title.
    :param sample_rate_hz: Used to label the time axis in seconds.
    """
    import matplotlib
    from matplotlib.figure import Figure

    seconds = data['frame'].to_numpy() / float(sample_rate_hz)
    intervals = label_intervals(data['label'].to_numpy(dtype=object))

    rows = len(names) + 1
    figure = Figure(figsize=(10, 1.8 * rows))
    axes = figure.subplots(rows, 1, sharex=True, squeeze=False)[:, 0]
    for axis, name in zip(axes, list(names) + ['score']):
        axis.plot(seconds, data[name].to_numpy(), linewidth=0.6)
        predicted = PREDICTION_PREFIX + name
        if predicted in data.columns:
            axis.plot(seconds, data[predicted].to_numpy(), linestyle='--',
                      color='tab:orange', linewidth=0.6)
        axis.set_ylabel(name)
        for _, start, stop in intervals:
            axis.axvspan(start / float(sample_rate_hz),
                         stop / float(sample_rate_hz),
                         color='tab:red', alpha=0.15, linewidth=0)
    axes[-1].plot(seconds, data['cutoff'].to_numpy(), linestyle='--',
                  color='black', linewidth=0.8)
    axes[-1].set_xlabel('time [s]')
    axes[0].set_title(title)
    figure.tight_layout()
    try:
        with matplotlib.rc_context({'svg.hashsalt': 'invenio-icsdetect'}):
            figure.savefig(path, format='svg', metadata={'Date': None})
    except (OSError, IOError) as e:
        raise IoFailureError('cannot write {0}: {1}'.format(path, e))
    logger.info('wrote %s', path)
