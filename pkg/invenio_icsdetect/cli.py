# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Click command-line interface for simulation and attack detection."""

import logging
import os
import sys
from functools import wraps

import click
import pandas as pd
from flask import current_app
from flask.cli import ScriptInfo, with_appcontext

from .attacks import canonical_scenario
from .errors import ICSDetectError, SchemaMismatchError
from .evaluation import Threshold, calibrate, evaluate, flag
from .lstm import LstmModel
from .pipeline import run_lstm, run_matrix_profile, write_outputs
from .profiles import estimate_period
from .proxies import current_icsdetect
from .traces import (FLOAT_FORMAT, generate_fleet, load, read_manifest,
                     write_manifest, write_run)
from .utils import build_manifest, build_run_dir, stage_timer


def handle_errors(f):
    """Decorator turning module errors into click exceptions.

    The exception carries the exit code of the error family.
    """
    @wraps(f)
    def inner(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ICSDetectError as e:
            exc = click.ClickException(str(e))
            exc.exit_code = e.exit_code
            raise exc
    return inner


def _echo_seed(seed):
    seed = current_icsdetect.seed if seed is None else seed
    click.secho('seed: {0}'.format(seed), fg='blue', file=sys.stderr)
    return seed


def _parse_span(value):
    """Parse a ``START:STOP`` frame span."""
    if value is None:
        return None
    try:
        start, stop = (int(part) for part in value.split(':'))
    except ValueError:
        raise click.BadParameter('expected START:STOP, got {0!r}'.format(
            value))
    return (start, stop)


def _record(directory, key, entry):
    """Add a command entry to the manifest of a directory."""
    try:
        manifest = read_manifest(directory)
    except SchemaMismatchError:
        manifest = {}
    manifest.setdefault('commands', {})[key] = entry
    write_manifest(directory, manifest)


def threshold_options(f):
    """Options shared by commands that apply a threshold."""
    options = [
        click.option('--threshold', 'threshold_method',
                     type=click.Choice(['mean+kstd', 'quantile', 'fixed']),
                     help='Cutoff calibration method.'),
        click.option('--k', type=float, help='Deviations for mean+kstd.'),
        click.option('--quantile', type=float, help='Quantile level.'),
        click.option('--cutoff', type=float, help='Fixed cutoff value.'),
        click.option('--calibration', callback=lambda ctx, p, v:
                     _parse_span(v),
                     help='Attack-free frame span START:STOP.'),
        click.option('--min-duration', type=int,
                     help='Minimal flagged interval length in frames.'),
        click.option('--gap-merge', type=int,
                     help='Merge flagged runs closer than this.'),
        click.option('--margin', type=int,
                     help='Transition margin around attacks in frames.'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


#
# Detection commands
#
@click.group()
@click.option('--config', 'config_file',
              type=click.Path(exists=True, dir_okay=False),
              help='Configuration file with ICSDETECT_* settings.')
@click.option('-v', '--verbose', count=True,
              help='Log stage summaries (-v) or details (-vv).')
@click.pass_context
@handle_errors
def icsdetect(ctx, config_file, verbose):
    """Simulate ICS process traces and detect attacks."""
    app = ctx.ensure_object(ScriptInfo).load_app()
    if verbose:
        app.logger.setLevel(logging.INFO if verbose == 1 else logging.DEBUG)
    if config_file:
        app.extensions['invenio-icsdetect'].load_config_file(config_file)


@icsdetect.command()
@click.option('--scenario', type=click.Choice(['none', 'canonical']),
              default='none', show_default=True)
@click.option('--attacked-plc', type=int, help='PLC receiving the attacks.')
@click.option('--duration', type=float, default=3600.0, show_default=True,
              help='Duration in seconds.')
@click.option('--output-dir', type=click.Path(file_okay=False),
              help='Run directory (default: timestamped below the run '
                   'root).')
@click.option('--seed', type=int)
@click.option('--noise-sigma', type=float)
@click.option('--pump-rate', type=float)
@click.option('--valve-rate', type=float)
@click.option('--sample-rate', type=float)
@click.option('--workers', type=int, default=1, show_default=True)
@with_appcontext
@handle_errors
def simulate(scenario, attacked_plc, duration, output_dir, seed, noise_sigma,
             pump_rate, valve_rate, sample_rate, workers):
    """Simulate the PLC fleet into a run directory."""
    seed = _echo_seed(seed)
    cfg = current_app.config
    plant = current_icsdetect.plant_config(
        rng_seed=seed, noise_sigma=noise_sigma, pump_rate_lps=pump_rate,
        valve_rate_lps=valve_rate, sample_rate_hz=sample_rate)
    script = canonical_scenario() if scenario == 'canonical' else None
    if attacked_plc is None:
        attacked_plc = cfg['ICSDETECT_FLEET_ATTACKED_PLC']
    run_dir = output_dir or build_run_dir(cfg['ICSDETECT_RUN_ROOT'])

    click.secho('Simulating {0} PLCs...'.format(cfg['ICSDETECT_FLEET_SIZE']),
                fg='green', bold=True, file=sys.stderr)
    timings = {}
    with stage_timer(timings, 'simulate'):
        traces = generate_fleet(
            plant, script, attacked_plc, duration,
            size=cfg['ICSDETECT_FLEET_SIZE'],
            jitter=cfg['ICSDETECT_FLEET_RATE_JITTER'], workers=workers)
    config = current_icsdetect.resolved_config()
    config.update({
        'attacked_plc': attacked_plc if script else None,
        'duration_s': duration,
        'plant': dict(plant._asdict()),
        'scenario': scenario,
    })
    with stage_timer(timings, 'write'):
        paths = write_run(traces, run_dir, run_info={
            'attacked_plc': attacked_plc if script else None,
            'scenario': scenario,
            'script': script.to_dict() if script else None,
        })
    _record(run_dir, 'simulate', build_manifest(
        'simulate', config, {'base': seed},
        outputs=[os.path.basename(p) for p in paths], timings=timings))
    current_app.logger.info('simulation finished in %.2f s',
                            timings['simulate'])
    click.echo(run_dir)


def _resolve_test(run_dir, plc, test_path):
    if test_path:
        return load(test_path)
    if not run_dir:
        raise click.UsageError('give --test or --run-dir')
    if plc is None:
        run = read_manifest(run_dir).get('run', {})
        plc = run.get('attacked_plc') or 1
    return load(os.path.join(run_dir, 'plc{0}.csv'.format(plc)))


def _resolve_train(run_dir, train_path):
    if train_path:
        return load(train_path)
    if not run_dir:
        raise click.UsageError('the LSTM needs --train or --run-dir')
    for name in sorted(read_manifest(run_dir).get('traces', {})):
        trace = load(os.path.join(run_dir, name))
        if trace.is_normal:
            return trace
    raise click.UsageError('no attack-free trace in {0}'.format(run_dir))


@icsdetect.command()
@click.option('--run-dir', type=click.Path(exists=True, file_okay=False))
@click.option('--plc', type=int, help='PLC of the run to analyse.')
@click.option('--test', 'test_path',
              type=click.Path(exists=True, dir_okay=False))
@click.option('--train', 'train_path',
              type=click.Path(exists=True, dir_okay=False))
@click.option('--method', type=click.Choice(['mp', 'lstm', 'both']),
              default='mp', show_default=True)
@click.option('--window', type=int, help='Matrix Profile window size.')
@click.option('--exclusion', type=int, help='Exclusion zone radius.')
@click.option('--epsilon', type=float,
              help='Minimal window deviation relative to full scale.')
@click.option('--brute', is_flag=True, default=False,
              help='Use the brute-force Matrix Profile.')
@click.option('--channels', help='Comma separated trace columns.')
@click.option('--include-valve', is_flag=True, default=False,
              help='Also feed the reported valve state.')
@threshold_options
@click.option('--layers', help='Comma separated LSTM layer widths.')
@click.option('--input-len', type=int)
@click.option('--learning-rate', type=float)
@click.option('--epochs', type=int)
@click.option('--batch-size', type=int)
@click.option('--stride', type=int)
@click.option('--optimizer', type=click.Choice(['adam', 'sgd']))
@click.option('--model', 'model_path',
              type=click.Path(exists=True, dir_okay=False),
              help='Trained LSTM model to reuse instead of training.')
@click.option('--save-model', type=click.Path(dir_okay=False),
              help='Write the trained LSTM model to this file.')
@click.option('--output-dir', type=click.Path(file_okay=False))
@click.option('--svg', is_flag=True, default=False,
              help='Also render an SVG chart.')
@click.option('--seed', type=int)
@with_appcontext
@handle_errors
def detect(run_dir, plc, test_path, train_path, method, window, exclusion,
           epsilon, brute, channels, include_valve, threshold_method, k,
           quantile, cutoff, calibration, min_duration, gap_merge, margin,
           layers, input_len, learning_rate, epochs, batch_size, stride,
           optimizer, model_path, save_model, output_dir, svg, seed):
    """Score a trace with the Matrix Profile and/or LSTM detector."""
    seed = _echo_seed(seed)
    state = current_icsdetect
    selection = state.channels(
        names=channels.split(',') if channels else None,
        include_valve=include_valve or None)
    threshold = state.threshold(method=threshold_method, k=k,
                                quantile=quantile, value=cutoff,
                                calibration_span=calibration)
    shared = state.evaluation_settings(min_duration=min_duration,
                                       gap_merge=gap_merge, margin=margin)
    test = _resolve_test(run_dir, plc, test_path)
    output_dir = output_dir or run_dir or os.path.dirname(
        os.path.abspath(test_path))

    timings = {}
    results = []
    if method in ('mp', 'both'):
        with stage_timer(timings, 'mp'):
            result = run_matrix_profile(
                test, channels=selection, threshold=threshold,
                fast=not brute, **dict(shared, **state.mp_settings(
                    window=window, exclusion_radius=exclusion,
                    epsilon=epsilon)))
        current_app.logger.info('matrix profile window size %d',
                                result.window)
        click.secho('window size: {0}'.format(result.window), fg='blue',
                    file=sys.stderr)
        results.append(result)
    if method in ('lstm', 'both'):
        lstm_config = state.lstm_config(
            layer_sizes=tuple(int(w) for w in layers.split(','))
            if layers else None,
            input_len=input_len, learning_rate=learning_rate, epochs=epochs,
            batch_size=batch_size, stride=stride, optimizer=optimizer,
            seed=seed)
        model = LstmModel.load(model_path) if model_path else None
        train_trace = None if model else _resolve_train(run_dir, train_path)
        with stage_timer(timings, 'lstm'):
            result = run_lstm(train_trace, test, config=lstm_config,
                              channels=selection, threshold=threshold,
                              model=model, **shared)
        if save_model:
            result.details['model'].save(save_model)
        results.append(result)

    outputs = []
    for result in results:
        with stage_timer(timings, 'write-' + result.detector):
            try:
                outputs.extend(write_outputs(result, output_dir,
                                             test.sample_rate_hz, svg=svg))
            except ImportError:
                raise click.ClickException(
                    'rendering needs matplotlib; install '
                    'invenio-icsdetect[plot]')
        click.echo(result.report.to_table())
    _record(output_dir, 'detect-' + method, build_manifest(
        'detect', state.resolved_config(), {'base': seed},
        inputs=[test_path or run_dir],
        outputs=[os.path.basename(p) for p in outputs], timings=timings))


@icsdetect.command()
@click.argument('trace_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--channel', default='flow', show_default=True)
@click.option('--prominence', type=float,
              help='Minimal autocorrelation of a period peak.')
@click.option('--output', type=click.Path(dir_okay=False),
              help='CSV receiving the autocorrelation curve.')
@click.option('--seed', type=int)
@with_appcontext
@handle_errors
def acf(trace_path, channel, prominence, output, seed):
    """Estimate the process period by autocorrelation."""
    _echo_seed(seed)
    if prominence is None:
        prominence = current_app.config['ICSDETECT_ACF_PROMINENCE']
    trace = load(trace_path)
    period = estimate_period(trace.column(channel), trace.sample_rate_hz,
                             prominence=prominence)
    output = output or os.path.join(
        os.path.dirname(os.path.abspath(trace_path)),
        'acf-{0}'.format(os.path.basename(trace_path)))
    lags = range(len(period.acf))
    pd.DataFrame({
        'lag': lags,
        'seconds': [lag / trace.sample_rate_hz for lag in lags],
        'acf': period.acf,
    }).to_csv(output, index=False, float_format=FLOAT_FORMAT,
              lineterminator='\n')
    click.echo('period: {0:g} s ({1} samples)'.format(period.seconds,
                                                      period.lag))


@icsdetect.command('eval')
@click.argument('results_path', type=click.Path(exists=True,
                                                dir_okay=False))
@threshold_options
@click.option('--window', type=int, default=300, show_default=True,
              help='Window of the detector that produced the scores.')
@click.option('--output', type=click.Path(dir_okay=False),
              help='JSON file receiving the report.')
@click.option('--seed', type=int)
@with_appcontext
@handle_errors
def eval_(results_path, threshold_method, k, quantile, cutoff, calibration,
          min_duration, gap_merge, margin, window, output, seed):
    """Re-threshold a results file and report again."""
    from .plots import read_results

    _echo_seed(seed)
    data, names = read_results(results_path)
    scores = data['score'].to_numpy()
    labels = data['label'].to_numpy(dtype=object)
    if threshold_method is None and cutoff is None:
        threshold = Threshold.create('fixed', value=data['cutoff'].iloc[0])
    else:
        threshold = current_icsdetect.threshold(
            method=threshold_method, k=k, quantile=quantile, value=cutoff,
            calibration_span=calibration)
    shared = current_icsdetect.evaluation_settings(
        min_duration=min_duration, gap_merge=gap_merge, margin=margin)
    gap = window // 4 if shared['gap_merge'] is None else shared['gap_merge']
    margin = window if shared['margin'] is None else shared['margin']
    value = calibrate(scores, threshold, labels=labels, window=window)
    flagged = flag(scores, value, min_duration=shared['min_duration'],
                   gap_merge=gap)
    report = evaluate(flagged, labels, transition_margin=margin, settings={
        'channels': names,
        'cutoff': value,
        'detector': os.path.basename(results_path),
        'gap_merge': gap,
        'min_duration': shared['min_duration'],
        'threshold': threshold.to_dict(),
        'transition_margin': margin,
        'window': window,
    })
    if output:
        with open(output, 'w') as fp:
            fp.write(report.to_json())
    click.echo(report.to_table())


@icsdetect.command()
@click.argument('results_path', type=click.Path(exists=True,
                                                dir_okay=False))
@click.option('--output', type=click.Path(dir_okay=False),
              help='SVG path (default: next to the results file).')
@click.option('--sample-rate', type=float)
@click.option('--title')
@click.option('--seed', type=int)
@with_appcontext
@handle_errors
def plot(results_path, output, sample_rate, title, seed):
    """Render the SVG chart of a results file."""
    from .plots import read_results, render_svg

    _echo_seed(seed)
    data, names = read_results(results_path)
    directory, name = os.path.split(os.path.splitext(results_path)[0])
    if output is None:
        output = os.path.join(directory,
                              name.replace('results', 'plot', 1) + '.svg')
    sample_rate = sample_rate or \
        current_app.config['ICSDETECT_PLANT_SAMPLE_RATE_HZ']
    try:
        render_svg(output, data, names, title or name,
                   sample_rate_hz=sample_rate)
    except ImportError:
        raise click.ClickException(
            'rendering needs matplotlib; install invenio-icsdetect[plot]')
    click.echo(output)


def main():
    """Entry point of the ``icsdetect`` console script."""
    from .factory import create_app
    icsdetect.main(obj=ScriptInfo(create_app=create_app),
                   prog_name='icsdetect')
