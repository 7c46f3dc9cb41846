# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.


"""Trace storage and channel selection tests."""

import json
import os

import numpy as np
import pytest

from invenio_icsdetect.attacks import AttackDirective, AttackScript
from invenio_icsdetect.errors import (InvalidConfigurationError,
                                      SchemaMismatchError, UnknownChannelError)
from invenio_icsdetect.process import PlantConfig, simulate
from invenio_icsdetect.profiles import estimate_period
from invenio_icsdetect.traces import (MANIFEST_NAME, ChannelSelection, Trace,
                                      generate_fleet, load, read_manifest,
                                      save, select, write_run)


@pytest.fixture(scope='module')
def short_trace():
    """Two cycles of normal operation."""
    return simulate(PlantConfig(), 300.0)


def test_trace_schema(short_trace):
    """Test the column layout of a trace."""
    with pytest.raises(SchemaMismatchError):
        Trace(short_trace.data.drop(columns=['temp']), 2.0)
    with pytest.raises(InvalidConfigurationError):
        Trace(short_trace.data, 0.0)
    assert len(short_trace) == 600
    assert repr(short_trace) == '<Trace plc1: 600 frames at 2.0 Hz>'
    with pytest.raises(UnknownChannelError):
        short_trace.column('pressure')


def test_attack_intervals(attacked_trace, normal_trace):
    """Test attack intervals of the canonical trace."""
    assert attacked_trace.attack_intervals() == [
        ('attack-1', 4200, 4800), ('attack-2', 6500, 7200)]
    assert not attacked_trace.is_normal
    assert normal_trace.attack_intervals() == []


def test_slice_and_relabel(short_trace):
    """Test derived traces."""
    part = short_trace.slice(100, 200)
    assert len(part) == 100
    assert part.manifest['slice'] == [100, 200]
    assert 'slice' not in short_trace.manifest
    assert part.column('t_s')[0] == 50.0

    script = AttackScript([AttackDirective.open_valve(10, 20)])
    relabeled = short_trace.relabel(script)
    assert relabeled.attack_intervals() == [('attack-1', 10, 20)]
    assert relabeled.manifest['script'] == script.to_dict()
    assert short_trace.is_normal


def test_select(short_trace):
    """Test detector input extraction."""
    data = select(short_trace)
    assert data.shape == (600, 2)
    assert np.array_equal(data[:, 1], short_trace.column('level1'))

    selection = ChannelSelection.default(include_valve=True)
    assert repr(selection) == 'flow,level1,valve_reported'
    data = select(short_trace, selection)
    assert data.shape == (600, 3)
    assert set(np.unique(data[:, 2])) <= {0.0, 1.0}

    with pytest.raises(UnknownChannelError):
        select(short_trace, ChannelSelection(['flow', 'pressure']))
    with pytest.raises(InvalidConfigurationError):
        ChannelSelection([])


def test_save_and_load(short_trace, tmpdir_path):
    """Test that a saved trace loads unchanged."""
    path = os.path.join(tmpdir_path, 'plc1.csv')
    save(short_trace, path)
    loaded = load(path)
    assert loaded == short_trace
    assert np.array_equal(loaded.column('flow'), short_trace.column('flow'))
    assert loaded.data['high2'].dtype == bool

    second = os.path.join(tmpdir_path, 'other.csv')
    save(short_trace.slice(0, 400), second)
    manifest = read_manifest(tmpdir_path)
    assert sorted(manifest['traces']) == ['other.csv', 'plc1.csv']
    assert manifest['traces']['other.csv']['n_frames'] == 400


def test_load_errors(short_trace, tmpdir_path):
    """Test refused trace files."""
    path = os.path.join(tmpdir_path, 'plc1.csv')
    short_trace.to_csv(path)
    with pytest.raises(SchemaMismatchError):
        load(path)

    save(short_trace, path)
    unlisted = os.path.join(tmpdir_path, 'unlisted.csv')
    short_trace.to_csv(unlisted)
    with pytest.raises(SchemaMismatchError):
        load(unlisted)

    short_trace.data.drop(columns=['temp']).to_csv(path, index=False)
    with pytest.raises(SchemaMismatchError):
        load(path)

    data = short_trace.data.copy()
    data['high2'] = 'maybe'
    data.to_csv(path, index=False)
    with pytest.raises(SchemaMismatchError):
        load(path)

    with open(os.path.join(tmpdir_path, MANIFEST_NAME), 'w') as fp:
        fp.write('{')
    with pytest.raises(SchemaMismatchError):
        read_manifest(tmpdir_path)


def test_generate_fleet():
    """Test seeds, jitter and the attacked instance of a fleet."""
    script = AttackScript([AttackDirective.open_valve(100, 200)])
    fleet = generate_fleet(PlantConfig(), script, 2, 300.0)
    assert [trace.plc_id for trace in fleet] == [1, 2, 3, 4, 5]
    assert [trace.is_normal for trace in fleet] == [
        True, False, True, True, True]

    seeds = [trace.manifest['seed'] for trace in fleet]
    assert len(set(seeds)) == 5
    assert all(trace.manifest['base_seed'] == 42 for trace in fleet)
    rates = [trace.manifest['plant']['pump_rate_lps'] for trace in fleet]
    assert rates == pytest.approx([0.098, 0.099, 0.100, 0.101, 0.102])

    parallel = generate_fleet(PlantConfig(), script, 2, 300.0, workers=3)
    assert parallel == fleet

    with pytest.raises(InvalidConfigurationError):
        generate_fleet(PlantConfig(), script, 6, 300.0)
    with pytest.raises(InvalidConfigurationError):
        generate_fleet(PlantConfig(), script, 0, 300.0)


def test_fleet_periods_stay_close():
    """Test that the rate jitter keeps the cycle periods within seconds."""
    fleet = generate_fleet(PlantConfig(), None, 1, 3600.0)
    periods = [estimate_period(trace.column('flow'), 2.0).seconds
               for trace in fleet]
    assert max(periods) - min(periods) <= 6.0


def test_write_run(tmpdir_path):
    """Test the layout of a run directory."""
    fleet = generate_fleet(PlantConfig(), None, 1, 300.0, size=2,
                           jitter=(0.0, ))
    run_dir = os.path.join(tmpdir_path, 'run')
    paths = write_run(fleet, run_dir, run_info={'scenario': 'none'})
    assert [os.path.basename(p) for p in paths] == ['plc1.csv', 'plc2.csv']

    with open(os.path.join(run_dir, MANIFEST_NAME)) as fp:
        manifest = json.load(fp)
    assert manifest['run'] == {'scenario': 'none'}
    assert manifest['traces']['plc2.csv']['plc_id'] == 2
    assert [load(p) for p in paths] == fleet
