# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Detector pipelines from a trace to a detection report."""

import logging
import os
from collections import namedtuple

import numpy as np

from .attacks import label_intervals
from .errors import DetectorError, IoFailureError
from .evaluation import (Threshold, calibrate, error_periodicity, evaluate,
                         flag, transition_peaks)
from .lstm import LstmConfig, lstm_score, predict_run, train
from .plots import read_results, render_svg, write_plot_data
from .profiles import MpConfig, choose_window, mp_brute, mp_fast, mp_score
from .traces import ChannelSelection, select

logger = logging.getLogger(__name__)

DetectionResult = namedtuple('DetectionResult', [
    'detector', 'names', 'channels', 'scores', 'cutoff', 'labels', 'report',
    'window', 'details'])
"""Scores, cutoff and report of one detector run."""


def default_calibration_span(labels, window, valid_from=0):
    """Attack-free span ending one window before the first attack.

    Without attacks the span covers the whole series.
    """
    intervals = label_intervals(labels)
    if not intervals:
        return (valid_from, len(labels))
    stop = intervals[0][1] - window
    if stop - valid_from < 10 * window:
        logger.warning('calibration span [%d, %d) is shorter than ten '
                       'windows', valid_from, stop)
    return (valid_from, max(valid_from, stop))


def _finish(detector, trace, selection, data, scores, window, threshold,
            min_duration, gap_merge, margin, valid_from=0, details=None,
            settings=None):
    labels = trace.labels
    threshold = threshold or Threshold.create()
    if threshold.calibration_span is None:
        span = default_calibration_span(labels, window, valid_from)
        threshold = threshold._replace(calibration_span=span)
    cutoff = calibrate(scores, threshold, labels=labels, window=window)
    gap_merge = window // 4 if gap_merge is None else gap_merge
    margin = window if margin is None else margin
    flagged = flag(scores, cutoff, min_duration=min_duration,
                   gap_merge=gap_merge)
    logger.info('%s: cutoff %.6g, %d flagged intervals', detector, cutoff,
                len(flagged))

    recorded = {
        'channels': list(selection.names),
        'cutoff': cutoff,
        'detector': detector,
        'gap_merge': gap_merge,
        'min_duration': min_duration,
        'threshold': threshold.to_dict(),
        'transition_margin': margin,
        'window': window,
    }
    recorded.update(settings or {})
    report = evaluate(flagged, labels, transition_margin=margin,
                      settings=recorded)
    return DetectionResult(detector, list(selection.names), data, scores,
                           cutoff, labels, report, window, details or {})


def run_matrix_profile(trace, channels=None, window=None,
                       exclusion_radius=None, relative_epsilon=1e-8,
                       prominence=0.2, threshold=None, min_duration=4,
                       gap_merge=None, margin=None, fast=True):
    """Score a trace with per-channel Matrix Profiles.

    Without ``window`` the period of the first channel over the attack-free
    prefix of the trace sets the window size.

    :param trace: A :class:`~invenio_icsdetect.traces.Trace`.
    :param channels: A :class:`~invenio_icsdetect.traces.ChannelSelection`.
    :returns: A :class:`DetectionResult`.
    """
    selection = channels or ChannelSelection.default()
    data = select(trace, selection)
    if window is None:
        intervals = trace.attack_intervals()
        prefix = intervals[0][1] if intervals else len(trace)
        if prefix < len(trace) // 2:
            prefix = len(trace)
        window = choose_window(data[:prefix, 0], trace.sample_rate_hz,
                               prominence=prominence)
    compute = mp_fast if fast else mp_brute
    profiles = []
    for column, name in enumerate(selection):
        config = MpConfig.for_series(data[:, column], window,
                                     exclusion_radius=exclusion_radius,
                                     relative_epsilon=relative_epsilon)
        logger.info('matrix profile of %s (m=%d, exclusion %d)', name,
                    config.m, config.exclusion_radius)
        profiles.append(compute(data[:, column], config))
    scores = mp_score(profiles)
    peaks = transition_peaks(scores, trace.labels, window)
    logger.info('score peaks at frames %s', peaks)
    return _finish(
        'mp', trace, selection, data, scores, window, threshold,
        min_duration, gap_merge, margin,
        details={'peaks': peaks, 'profiles': profiles},
        settings={'exclusion_radius': profiles[0].config.exclusion_radius})


def run_lstm(train_trace, test_trace, config=None, channels=None,
             threshold=None, min_duration=4, gap_merge=None, margin=None,
             model=None):
    """Train a predictor on a normal trace and score a test trace.

    :param train_trace: Attack-free training trace.
    :param test_trace: Trace to score.
    :param config: An :class:`~invenio_icsdetect.lstm.LstmConfig`; its
        ``input_dim`` follows the channel selection.
    :param model: A trained model to reuse instead of training.
    :returns: A :class:`DetectionResult`.
    """
    selection = channels or ChannelSelection.default()
    config = (config or LstmConfig())._replace(input_dim=len(selection))
    if model is None:
        model = train(config, select(train_trace, selection),
                      labels=train_trace.labels)
    data = select(test_trace, selection)
    run = predict_run(model, data)
    scores = lstm_score(run)
    if not np.all(np.isfinite(scores)):
        raise DetectorError('prediction errors are not finite')
    periodicity = error_periodicity(
        scores[run.valid_from:], test_trace.sample_rate_hz,
        [(label, max(0, start - run.valid_from), stop - run.valid_from)
         for label, start, stop in test_trace.attack_intervals()])
    logger.info('prediction error period: normal %s s, attack %s s',
                periodicity['normal'], periodicity['attack'])
    return _finish(
        'lstm', test_trace, selection, data, scores,
        model.config.input_len, threshold, min_duration, gap_merge, margin,
        valid_from=run.valid_from,
        details={'model': model, 'run': run, 'periodicity': periodicity},
        settings={
            'epochs': model.config.epochs,
            'error_period_s': periodicity,
            'layer_sizes': list(model.config.layer_sizes),
            'learning_rate': model.config.learning_rate,
            'optimizer': model.config.optimizer,
            'seed': model.config.seed,
            'stride': model.config.stride,
            'clip_norm': model.config.clip_norm,
            'lr_decay': model.config.lr_decay,
            'final_loss': model.history[-1] if model.history else None,
        })


def aligned_predictions(result):
    """Predicted channels of a run, one row per frame.

    Frames before the first prediction hold NaN. Detectors without
    predictions return ``None``.
    """
    run = result.details.get('run')
    if run is None:
        return None
    predictions = np.full((run.n_frames, run.predictions.shape[1]), np.nan)
    predictions[run.valid_from:] = run.predictions
    return predictions


def write_outputs(result, output_dir, sample_rate_hz, svg=False):
    """Write report, results file and optional SVG of a detector run.

    :returns: List of written paths.
    """
    try:
        os.makedirs(output_dir, exist_ok=True)
    except (OSError, IOError) as e:
        raise IoFailureError('cannot create {0}: {1}'.format(output_dir, e))
    base = os.path.join(output_dir, '{0}-' + result.detector)
    paths = [base.format('report') + '.json', base.format('report') + '.txt',
             base.format('results') + '.csv']
    try:
        with open(paths[0], 'w') as fp:
            fp.write(result.report.to_json())
        with open(paths[1], 'w') as fp:
            fp.write(result.report.to_table())
    except (OSError, IOError) as e:
        raise IoFailureError('cannot write report: {0}'.format(e))
    write_plot_data(paths[2], result.channels, result.names, result.scores,
                    result.cutoff, result.labels,
                    predictions=aligned_predictions(result))
    if svg:
        paths.append(base.format('plot') + '.svg')
        data, names = read_results(paths[2])
        render_svg(paths[3], data, names,
                   'Detector: {0}'.format(result.detector),
                   sample_rate_hz=sample_rate_hz)
    return paths
