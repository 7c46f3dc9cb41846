# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.


"""Test CLI."""

import json
import os

import numpy as np
import pytest
from click.testing import CliRunner
from mock import patch

from invenio_icsdetect.cli import icsdetect as cmd
from invenio_icsdetect.traces import MANIFEST_NAME, load, save


def _read(path):
    with open(path, 'rb') as fp:
        return fp.read()


def _simulate(runner, script_info, run_dir, *args):
    return runner.invoke(cmd, ['simulate', '--output-dir', run_dir] +
                         list(args), obj=script_info)


def test_simulate(script_info, tmpdir_path):
    """Run a short simulation twice."""
    runner = CliRunner()
    first = os.path.join(tmpdir_path, 'first')
    second = os.path.join(tmpdir_path, 'second')

    result = _simulate(runner, script_info, first, '--duration', '300')
    assert result.exit_code == 0
    assert 'seed: 42' in result.output
    assert first in result.output
    result = _simulate(runner, script_info, second, '--duration', '300')
    assert result.exit_code == 0

    for k in range(1, 6):
        name = 'plc{0}.csv'.format(k)
        assert _read(os.path.join(first, name)) == \
            _read(os.path.join(second, name))

    with open(os.path.join(first, MANIFEST_NAME)) as fp:
        manifest = json.load(fp)
    assert manifest['run']['scenario'] == 'none'
    assert len(manifest['traces']) == 5
    entry = manifest['commands']['simulate']
    assert entry['seeds'] == {'base': 42}
    assert entry['config']['duration_s'] == 300.0
    assert set(entry['timings']) == {'simulate', 'write'}
    assert load(os.path.join(first, 'plc2.csv')).is_normal


def test_simulate_options(script_info, tmpdir_path):
    """Run simulations with overrides and refused settings."""
    runner = CliRunner()
    run_dir = os.path.join(tmpdir_path, 'run')
    result = _simulate(runner, script_info, run_dir, '--duration', '300',
                       '--seed', '7', '--noise-sigma', '0', '--workers', '2')
    assert result.exit_code == 0
    assert 'seed: 7' in result.output
    trace = load(os.path.join(run_dir, 'plc3.csv'))
    assert trace.manifest['base_seed'] == 7
    assert set(np.unique(trace.column('flow'))) <= {0.0, 0.1}

    result = _simulate(runner, script_info, run_dir, '--pump-rate', '0.01')
    assert result.exit_code == 2
    result = _simulate(runner, script_info, run_dir, '--scenario',
                       'canonical', '--duration', '300')
    assert result.exit_code == 2
    result = _simulate(runner, script_info, run_dir, '--attacked-plc', '9',
                       '--scenario', 'canonical')
    assert result.exit_code == 2
    result = _simulate(runner, script_info, run_dir, '--attacked-plc', '0',
                       '--scenario', 'canonical')
    assert result.exit_code == 2
    assert 'within 1..5, got 0' in result.output


def test_default_run_dir(app, script_info):
    """Run a simulation into a timestamped directory."""
    runner = CliRunner()
    with patch('invenio_icsdetect.utils.run_timestamp',
               return_value='20260101-000000'):
        result = runner.invoke(cmd, ['simulate', '--duration', '300'],
                               obj=script_info)
    assert result.exit_code == 0
    run_dir = os.path.join(app.config['ICSDETECT_RUN_ROOT'],
                           '20260101-000000')
    assert os.path.exists(os.path.join(run_dir, 'plc1.csv'))


def test_config_file(script_info, tmpdir_path):
    """Run with a configuration file and verbose logging."""
    path = os.path.join(tmpdir_path, 'icsdetect.cfg')
    with open(path, 'w') as fp:
        fp.write('ICSDETECT_SEED = 11\nICSDETECT_FLEET_SIZE = 2\n'
                 'ICSDETECT_FLEET_ATTACKED_PLC = 1\n')
    runner = CliRunner()
    run_dir = os.path.join(tmpdir_path, 'run')
    result = runner.invoke(cmd, [
        '--config', path, '-v', 'simulate', '--output-dir', run_dir,
        '--duration', '300'], obj=script_info)
    assert result.exit_code == 0
    assert 'seed: 11' in result.output
    assert sorted(os.listdir(run_dir)) == [
        MANIFEST_NAME, 'plc1.csv', 'plc2.csv']


def test_detect_and_eval(script_info, tmpdir_path):
    """Simulate the canonical scenario, detect and re-threshold."""
    runner = CliRunner()
    run_dir = os.path.join(tmpdir_path, 'run')
    result = _simulate(runner, script_info, run_dir, '--scenario',
                       'canonical')
    assert result.exit_code == 0

    result = runner.invoke(cmd, ['detect', '--run-dir', run_dir],
                           obj=script_info)
    assert result.exit_code == 0
    assert 'window size: 300' in result.output
    assert 'recall:            1.000' in result.output
    for name in ('report-mp.json', 'report-mp.txt', 'results-mp.csv'):
        assert os.path.exists(os.path.join(run_dir, name))
    with open(os.path.join(run_dir, 'report-mp.json')) as fp:
        report = json.load(fp)
    assert report['summary']['detected'] == 2
    with open(os.path.join(run_dir, MANIFEST_NAME)) as fp:
        manifest = json.load(fp)
    assert 'mp' in manifest['commands']['detect-mp']['timings']
    assert load(os.path.join(run_dir, 'plc3.csv')).attack_intervals()

    results = os.path.join(run_dir, 'results-mp.csv')
    result = runner.invoke(cmd, ['eval', results, '--threshold', 'fixed',
                                 '--cutoff', '1e9'], obj=script_info)
    assert result.exit_code == 0
    assert 'recall:            0.000' in result.output
    assert 'flagged intervals: none' in result.output

    output = os.path.join(tmpdir_path, 'eval.json')
    result = runner.invoke(cmd, ['eval', results, '--output', output],
                           obj=script_info)
    assert result.exit_code == 0
    with open(output) as fp:
        assert json.load(fp)['summary'] == report['summary']

    result = runner.invoke(cmd, ['detect', '--run-dir', run_dir,
                                 '--include-valve'], obj=script_info)
    assert result.exit_code == 4

    result = runner.invoke(cmd, ['detect', '--run-dir', run_dir,
                                 '--channels', 'flow,pressure'],
                           obj=script_info)
    assert result.exit_code == 3

    result = runner.invoke(cmd, ['detect', '--run-dir', run_dir,
                                 '--window', '300', '--calibration',
                                 '0:100'], obj=script_info)
    assert result.exit_code == 4


def test_detect_is_reproducible(script_info, tmpdir_path):
    """Run simulation and detection twice with the same flags."""
    runner = CliRunner()
    run_dirs = [os.path.join(tmpdir_path, name) for name in ('a', 'b')]
    for run_dir in run_dirs:
        result = _simulate(runner, script_info, run_dir, '--scenario',
                           'canonical', '--seed', '3')
        assert result.exit_code == 0
        result = runner.invoke(cmd, ['detect', '--run-dir', run_dir,
                                     '--method', 'mp'], obj=script_info)
        assert result.exit_code == 0

    names = ['plc{0}.csv'.format(k) for k in range(1, 6)] + [
        'report-mp.json', 'report-mp.txt', 'results-mp.csv']
    for name in names:
        assert _read(os.path.join(run_dirs[0], name)) == \
            _read(os.path.join(run_dirs[1], name))


def test_detect_lstm(script_info, trace_factory, tmpdir_path):
    """Train and reuse a small LSTM from the command line."""
    t = np.arange(800)
    normal = trace_factory(np.sin(2 * np.pi * t / 40))
    flow = np.sin(2 * np.pi * t / 40)
    flow[600:640] += 4.0
    labels = ['normal'] * 600 + ['attack-1'] * 40 + ['normal'] * 160
    attacked = trace_factory(flow, labels=labels)
    train_path = os.path.join(tmpdir_path, 'train.csv')
    test_path = os.path.join(tmpdir_path, 'test.csv')
    save(normal, train_path)
    save(attacked, test_path)
    model_path = os.path.join(tmpdir_path, 'model.json')

    runner = CliRunner()
    args = ['detect', '--method', 'lstm', '--test', test_path,
            '--layers', '6', '--input-len', '10', '--epochs', '2',
            '--batch-size', '16', '--stride', '4', '--seed', '5']
    result = runner.invoke(cmd, args + ['--train', train_path,
                                        '--save-model', model_path],
                           obj=script_info)
    assert result.exit_code == 0
    assert 'seed: 5' in result.output
    assert os.path.exists(os.path.join(tmpdir_path, 'report-lstm.json'))
    assert os.path.exists(model_path)

    first = _read(os.path.join(tmpdir_path, 'results-lstm.csv'))
    result = runner.invoke(cmd, args + ['--model', model_path],
                           obj=script_info)
    assert result.exit_code == 0
    assert _read(os.path.join(tmpdir_path, 'results-lstm.csv')) == first

    result = runner.invoke(cmd, ['detect', '--method', 'lstm', '--test',
                                 test_path], obj=script_info)
    assert result.exit_code == 2


def test_acf(script_info, trace_factory, tmpdir_path):
    """Estimate periods from the command line."""
    t = np.arange(2000)
    path = os.path.join(tmpdir_path, 'sine.csv')
    save(trace_factory(np.sin(2 * np.pi * t / 100)), path)

    runner = CliRunner()
    result = runner.invoke(cmd, ['acf', path], obj=script_info)
    assert result.exit_code == 0
    assert 'period: 50 s (100 samples)' in result.output
    assert os.path.exists(os.path.join(tmpdir_path, 'acf-sine.csv'))

    noise_path = os.path.join(tmpdir_path, 'noise.csv')
    noise = np.random.default_rng(1).standard_normal(2000)
    save(trace_factory(noise), noise_path)
    result = runner.invoke(cmd, ['acf', noise_path], obj=script_info)
    assert result.exit_code == 4

    result = runner.invoke(cmd, ['acf', path, '--channel', 'pressure'],
                           obj=script_info)
    assert result.exit_code == 3


def test_plot(script_info, trace_factory, tmpdir_path):
    """Render a results file."""
    pytest.importorskip('matplotlib')
    t = np.arange(600)
    flow = np.sin(2 * np.pi * t / 40)
    flow[500:520] = 0.0
    labels = ['normal'] * 500 + ['attack-1'] * 20 + ['normal'] * 80
    trace_path = os.path.join(tmpdir_path, 'trace.csv')
    save(trace_factory(flow, level1=np.cos(2 * np.pi * t / 40),
                       labels=labels), trace_path)

    runner = CliRunner()
    result = runner.invoke(cmd, ['detect', '--test', trace_path,
                                 '--window', '40', '--min-duration', '1'],
                           obj=script_info)
    assert result.exit_code == 0
    result = runner.invoke(cmd, ['plot', os.path.join(tmpdir_path,
                                                      'results-mp.csv')],
                           obj=script_info)
    assert result.exit_code == 0
    assert os.path.exists(os.path.join(tmpdir_path, 'plot-mp.svg'))
