# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Invenio module for attack detection on industrial process traces."""

import errno
import os

from . import config
from .cli import icsdetect as icsdetect_cmd
from .errors import InvalidConfigurationError, IoFailureError
from .evaluation import Threshold
from .lstm import LstmConfig
from .process import PlantConfig
from .traces import ChannelSelection
from .utils import to_jsonable


def _pick(overrides):
    """Drop overrides that were not given."""
    return dict((k, v) for k, v in overrides.items() if v is not None)


class _DetectState(object):
    """Resolve typed configuration objects from the application config."""

    def __init__(self, app):
        """Initialize state.

        :param app: An instance of :class:`~flask.app.Flask`.
        """
        self.app = app

    def load_config_file(self, path):
        """Load ``KEY = value`` settings from a configuration file.

        Values from the file take precedence over the defaults.

        :param path: Path of the configuration file.
        """
        try:
            self.app.config.from_pyfile(os.path.abspath(path))
        except (OSError, IOError) as e:
            if getattr(e, 'errno', None) in (errno.ENOENT, errno.EISDIR):
                raise IoFailureError(
                    'cannot read configuration file {0}'.format(path))
            raise IoFailureError(str(e))
        except SyntaxError as e:
            raise InvalidConfigurationError(
                'invalid configuration file {0}: {1}'.format(path, e))

    @property
    def seed(self):
        """Base seed of all random streams."""
        return self.app.config['ICSDETECT_SEED']

    def plant_config(self, **overrides):
        """Plant configuration with keyword overrides.

        :returns: A validated :class:`~invenio_icsdetect.process.PlantConfig`.
        """
        plant = PlantConfig.from_mapping(self.app.config)
        return plant._replace(**_pick(overrides)).validate()

    def lstm_config(self, **overrides):
        """LSTM configuration with keyword overrides."""
        cfg = self.app.config
        lstm = LstmConfig(
            layer_sizes=tuple(cfg['ICSDETECT_LSTM_LAYER_SIZES']),
            input_len=cfg['ICSDETECT_LSTM_INPUT_LEN'],
            learning_rate=cfg['ICSDETECT_LSTM_LEARNING_RATE'],
            epochs=cfg['ICSDETECT_LSTM_EPOCHS'],
            batch_size=cfg['ICSDETECT_LSTM_BATCH_SIZE'],
            seed=cfg['ICSDETECT_SEED'],
            optimizer=cfg['ICSDETECT_LSTM_OPTIMIZER'],
            stride=cfg['ICSDETECT_LSTM_STRIDE'],
            clip_norm=cfg['ICSDETECT_LSTM_CLIP_NORM'],
            lr_decay=cfg['ICSDETECT_LSTM_LR_DECAY'],
        )
        return lstm._replace(**_pick(overrides)).validate()

    def threshold(self, method=None, k=None, quantile=None, value=None,
                  calibration_span=None):
        """Threshold settings with keyword overrides."""
        cfg = self.app.config
        return Threshold.create(
            method=method or cfg['ICSDETECT_THRESHOLD_METHOD'],
            k=cfg['ICSDETECT_THRESHOLD_K'] if k is None else k,
            quantile=(cfg['ICSDETECT_THRESHOLD_QUANTILE']
                      if quantile is None else quantile),
            value=cfg['ICSDETECT_THRESHOLD_VALUE'] if value is None
            else value,
            calibration_span=calibration_span,
        )

    def channels(self, names=None, include_valve=None):
        """Detector input channels."""
        cfg = self.app.config
        names = list(names or cfg['ICSDETECT_CHANNELS'])
        if include_valve is None:
            include_valve = cfg['ICSDETECT_INCLUDE_VALVE_REPORTED']
        if include_valve and 'valve_reported' not in names:
            names.append('valve_reported')
        return ChannelSelection(names)

    def mp_settings(self, window=None, exclusion_radius=None, epsilon=None):
        """Keyword arguments of the Matrix Profile pipeline."""
        cfg = self.app.config
        return {
            'window': cfg['ICSDETECT_MP_WINDOW'] if window is None
            else window,
            'exclusion_radius': (cfg['ICSDETECT_MP_EXCLUSION_RADIUS']
                                 if exclusion_radius is None
                                 else exclusion_radius),
            'relative_epsilon': (cfg['ICSDETECT_MP_STD_EPSILON']
                                 if epsilon is None else epsilon),
            'prominence': cfg['ICSDETECT_ACF_PROMINENCE'],
        }

    def evaluation_settings(self, min_duration=None, gap_merge=None,
                            margin=None):
        """Keyword arguments shared by all detector pipelines."""
        cfg = self.app.config
        return {
            'min_duration': cfg['ICSDETECT_MIN_DURATION']
            if min_duration is None else min_duration,
            'gap_merge': cfg['ICSDETECT_GAP_MERGE']
            if gap_merge is None else gap_merge,
            'margin': cfg['ICSDETECT_TRANSITION_MARGIN']
            if margin is None else margin,
        }

    def resolved_config(self):
        """All ``ICSDETECT_*`` settings as JSON-serializable dictionary."""
        return to_jsonable(dict(
            (k, v) for k, v in self.app.config.items()
            if k.startswith('ICSDETECT_')))


class InvenioICSDetect(object):
    """Invenio-ICSDetect extension."""

    def __init__(self, app=None, **kwargs):
        """Extension initialization.

        :param app: An instance of :class:`~flask.app.Flask`.
        """
        self._state = None

        if app:
            self.init_app(app, **kwargs)

    def init_app(self, app, **kwargs):
        """Flask application initialization.

        :param app: An instance of :class:`~flask.app.Flask`.
        """
        self.init_config(app)

        app.cli.add_command(icsdetect_cmd)

        state = _DetectState(app)
        self._state = app.extensions['invenio-icsdetect'] = state

    @staticmethod
    def init_config(app):
        """Initialize configuration.

        :param app: An instance of :class:`~flask.app.Flask`.
        """
        for k in dir(config):
            if k.startswith('ICSDETECT_'):
                app.config.setdefault(k, getattr(config, k))

    def __getattr__(self, name):
        """Proxy to state object."""
        return getattr(self._state, name, None)
