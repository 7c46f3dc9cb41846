# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.


"""Module tests."""

import json
import os

import pytest
from flask import Flask
from mock import patch

from invenio_icsdetect import InvenioICSDetect, current_icsdetect
from invenio_icsdetect.errors import InvalidConfigurationError, IoFailureError
from invenio_icsdetect.evaluation import ThresholdMethod
from invenio_icsdetect.factory import create_app


def test_version():
    """Test version import."""
    from invenio_icsdetect import __version__
    assert __version__


def test_init():
    """Test extension initialization."""
    app = Flask('testapp')
    ext = InvenioICSDetect(app)
    assert 'invenio-icsdetect' in app.extensions
    assert 'icsdetect' in app.cli.commands

    app = Flask('testapp')
    ext = InvenioICSDetect()
    assert 'invenio-icsdetect' not in app.extensions
    ext.init_app(app)
    assert 'invenio-icsdetect' in app.extensions
    assert ext.seed == 42


def test_default_config(app):
    """Test that defaults are filled in without overriding."""
    assert app.config['ICSDETECT_PLANT_SAMPLE_RATE_HZ'] == 2.0
    assert app.config['ICSDETECT_CHANNELS'] == ('flow', 'level1')

    app = Flask('testapp')
    app.config['ICSDETECT_SEED'] = 7
    InvenioICSDetect(app)
    assert app.config['ICSDETECT_SEED'] == 7


def test_proxy(app):
    """Test the current state proxy."""
    assert current_icsdetect.seed == 42
    assert current_icsdetect.plant_config().period_s == pytest.approx(150.0)


def test_typed_settings(app):
    """Test the typed configuration objects."""
    state = app.extensions['invenio-icsdetect']

    plant = state.plant_config(noise_sigma=0.0, pump_rate_lps=None)
    assert plant.noise_sigma == 0.0
    assert plant.pump_rate_lps == 0.10
    with pytest.raises(InvalidConfigurationError):
        state.plant_config(pump_rate_lps=0.01)

    lstm = state.lstm_config(epochs=3)
    assert lstm.epochs == 3
    assert lstm.layer_sizes == (64, 64, 32)
    assert lstm.seed == 42
    assert lstm.clip_norm == 1.0
    assert lstm.lr_decay == 0.05

    threshold = state.threshold()
    assert threshold.method is ThresholdMethod.MEAN_PLUS_K_STD
    assert threshold.parameter == 4.0
    threshold = state.threshold(method='quantile', quantile=0.99)
    assert threshold.parameter == 0.99

    assert state.channels().names == ('flow', 'level1')
    assert state.channels(include_valve=True).names == (
        'flow', 'level1', 'valve_reported')
    app.config['ICSDETECT_INCLUDE_VALVE_REPORTED'] = True
    assert len(state.channels(names=['level1'])) == 2

    settings = state.mp_settings(window=120)
    assert settings['window'] == 120
    assert settings['exclusion_radius'] is None
    assert state.evaluation_settings()['min_duration'] == 4


def test_resolved_config_is_serializable(app):
    """Test that the resolved configuration is plain JSON."""
    resolved = current_icsdetect.resolved_config()
    assert resolved['ICSDETECT_LSTM_LAYER_SIZES'] == [64, 64, 32]
    assert 'TESTING' not in resolved
    json.dumps(resolved)


def test_load_config_file(app, tmpdir_path):
    """Test loading settings from a configuration file."""
    path = os.path.join(tmpdir_path, 'icsdetect.cfg')
    with open(path, 'w') as fp:
        fp.write('ICSDETECT_SEED = 7\nICSDETECT_LSTM_EPOCHS = 2\n')
    current_icsdetect.load_config_file(path)
    assert current_icsdetect.seed == 7
    assert current_icsdetect.lstm_config().epochs == 2

    with pytest.raises(IoFailureError):
        current_icsdetect.load_config_file(
            os.path.join(tmpdir_path, 'missing.cfg'))

    with open(path, 'w') as fp:
        fp.write('ICSDETECT_SEED = = 7\n')
    with pytest.raises(InvalidConfigurationError):
        current_icsdetect.load_config_file(path)


def test_create_app(tmpdir_path):
    """Test the application factory of the console script."""
    app = create_app(ICSDETECT_SEED=3)
    assert app.name == 'invenio_icsdetect'
    assert app.extensions['invenio-icsdetect'].seed == 3

    path = os.path.join(tmpdir_path, 'icsdetect.cfg')
    with open(path, 'w') as fp:
        fp.write('ICSDETECT_FLEET_SIZE = 3\n')
    with patch.dict(os.environ, {'ICSDETECT_CONFIG': path}):
        app = create_app()
    assert app.config['ICSDETECT_FLEET_SIZE'] == 3
