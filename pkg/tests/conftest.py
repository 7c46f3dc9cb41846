# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Pytest configuration."""

import shutil
import tempfile

import numpy as np
import pandas as pd
import pytest
from flask import Flask
from flask.cli import ScriptInfo

from invenio_icsdetect import InvenioICSDetect
from invenio_icsdetect.attacks import NORMAL, canonical_scenario
from invenio_icsdetect.process import PlantConfig, simulate
from invenio_icsdetect.traces import COLUMNS, LABEL_COLUMN, Trace


def pytest_addoption(parser):
    """Add the option enabling long running tests."""
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run slow tests')


def pytest_configure(config):
    """Register the slow marker."""
    config.addinivalue_line('markers', 'slow: long running test')


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless asked for."""
    if config.getoption('--runslow'):
        return
    skip = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


@pytest.fixture()
def app():
    """Flask application fixture."""
    instance_path = tempfile.mkdtemp()
    app = Flask('testapp', instance_path=instance_path)
    app.config.update(
        TESTING=True,
        ICSDETECT_RUN_ROOT=instance_path,
    )
    InvenioICSDetect(app)

    with app.app_context():
        yield app

    # Teardown instance path.
    shutil.rmtree(instance_path)


@pytest.fixture()
def script_info(app):
    """Script info pointing the CLI to the test application."""
    return ScriptInfo(create_app=lambda *args: app)


@pytest.fixture()
def tmpdir_path():
    """Temporary directory removed after the test."""
    path = tempfile.mkdtemp()
    yield path
    shutil.rmtree(path)


@pytest.fixture(scope='session')
def normal_trace():
    """One hour of normal operation of the nominal plant."""
    return simulate(PlantConfig(), 3600.0)


@pytest.fixture(scope='session')
def attacked_trace():
    """One hour of the nominal plant under the canonical scenario."""
    return simulate(PlantConfig(), 3600.0, script=canonical_scenario())


def make_trace(flow, level1=None, labels=None, sample_rate_hz=2.0):
    """Build a trace from synthetic flow and level series."""
    flow = np.asarray(flow, dtype=float)
    n = len(flow)
    data = pd.DataFrame({
        't_s': np.arange(n) / sample_rate_hz,
        'flow': flow,
        'level1': flow if level1 is None else np.asarray(level1, float),
        'level2': np.zeros(n),
        'high2': np.zeros(n, dtype=bool),
        'low2': np.zeros(n, dtype=bool),
        'valve_reported': np.zeros(n, dtype=bool),
        'pump_reported': np.zeros(n, dtype=bool),
        'temp': np.full(n, 21.0),
    }, columns=COLUMNS)
    data[LABEL_COLUMN] = list(labels) if labels is not None \
        else [NORMAL] * n
    return Trace(data, sample_rate_hz)


@pytest.fixture()
def trace_factory():
    """Factory building traces from synthetic series."""
    return make_trace
