# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Simulation of the two-container filling and draining process.

Pump P101 moves water from Container 1 into Container 2 until the level of
Container 2 reaches the high threshold; valve M102 then drains it back until
the low threshold is reached. The dynamics are piecewise linear, so a forward
Euler step at the sample period is exact between threshold crossings.
"""

import logging
import math
from collections import namedtuple
from enum import Enum

import numpy as np
import pandas as pd

from .attacks import NORMAL, apply
from .errors import InvalidConfigurationError, NonPhysicalError
from .traces import COLUMNS, LABEL_COLUMN, Trace

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9
"""Absolute tolerance (liters) of level comparisons and clamping."""

TEMP_FULL_SCALE_C = 100.0
"""Full scale of the PT100 temperature sensor B104."""

_PLANT_FIELDS = (
    'container_capacity_l',
    'level_low_l',
    'level_high_l',
    'pump_rate_lps',
    'valve_rate_lps',
    'total_water_l',
    'sample_rate_hz',
    'noise_sigma',
    'ambient_temp_c',
    'rng_seed',
    'hysteresis',
    'initial_level2_l',
)


class PlantConfig(namedtuple('PlantConfig', _PLANT_FIELDS,
                             defaults=(10.0, 2.0, 8.0, 0.10, 1.0 / 15.0, 10.0,
                                       2.0, 0.005, 21.0, 42, 0.01, None))):
    """Physical constants of one plant instance."""

    __slots__ = ()

    @classmethod
    def from_mapping(cls, mapping, prefix='ICSDETECT_PLANT_',
                     seed_key='ICSDETECT_SEED'):
        """Build a configuration from ``ICSDETECT_PLANT_*`` style keys.

        :param mapping: A mapping such as ``app.config``.
        :param prefix: Prefix of the plant keys.
        :param seed_key: Key holding the random seed.
        :returns: A :class:`PlantConfig`; missing keys keep their defaults.
        """
        values = {}
        for field in cls._fields:
            key = prefix + field.upper()
            if key in mapping:
                values[field] = mapping[key]
        if seed_key in mapping:
            values['rng_seed'] = mapping[seed_key]
        return cls(**values)

    def validate(self):
        """Check the invariants of the configuration.

        :raises InvalidConfigurationError: On the first violated invariant.
        :returns: The configuration itself.
        """
        if not 0 < self.level_low_l < self.level_high_l \
                <= self.container_capacity_l:
            raise InvalidConfigurationError(
                'levels must satisfy 0 < low ({0}) < high ({1}) <= capacity '
                '({2})'.format(self.level_low_l, self.level_high_l,
                               self.container_capacity_l))
        if not self.pump_rate_lps > self.valve_rate_lps > 0:
            raise InvalidConfigurationError(
                'rates must satisfy pump ({0}) > valve ({1}) > 0'.format(
                    self.pump_rate_lps, self.valve_rate_lps))
        if self.sample_rate_hz <= 0:
            raise InvalidConfigurationError('sample rate must be positive')
        if self.noise_sigma < 0 or self.hysteresis < 0:
            raise InvalidConfigurationError(
                'noise and hysteresis must not be negative')
        level2 = self.start_level2_l
        for low, high in ((level2, level2),
                          (self.level_low_l, self.level_high_l)):
            if low < 0 or high > self.container_capacity_l \
                    or self.total_water_l - high < 0 \
                    or self.total_water_l - low > self.container_capacity_l:
                raise InvalidConfigurationError(
                    'total water of {0} l does not fit both containers over '
                    'the level range [{1}, {2}]'.format(
                        self.total_water_l, low, high))
        return self

    @property
    def start_level2_l(self):
        """Level of Container 2 at time zero."""
        if self.initial_level2_l is None:
            return self.level_low_l
        return self.initial_level2_l

    @property
    def dt(self):
        """Sample period in seconds."""
        return 1.0 / self.sample_rate_hz

    @property
    def full_scale(self):
        """Full scale of every analog sensor channel."""
        return {
            'flow': self.pump_rate_lps,
            'level1': self.container_capacity_l,
            'level2': self.container_capacity_l,
            'temp': TEMP_FULL_SCALE_C,
        }

    @property
    def period_s(self):
        """Closed-form duration of one filling and draining cycle."""
        band = self.level_high_l - self.level_low_l
        return band / self.pump_rate_lps + band / self.valve_rate_lps

    @property
    def fill_factor(self):
        """Slow-down of the filling phase while the valve is forced open."""
        return self.pump_rate_lps / (self.pump_rate_lps - self.valve_rate_lps)


class Phase(Enum):
    """Phase of the control cycle."""

    FILLING = 'filling'
    DRAINING = 'draining'


ProcessState = namedtuple('ProcessState', [
    't_s', 'level1_l', 'level2_l', 'flow_lps', 'pump_on', 'valve_open',
    'temp_c', 'phase',
])
"""Noiseless physical state of one plant instance."""

SensorFrame = namedtuple('SensorFrame', COLUMNS)
"""Sensor readings as polled by the HMI for one sample."""


def initial_state(config):
    """Return the state of a plant at time zero.

    :param config: A :class:`PlantConfig`.
    """
    level2 = config.start_level2_l
    if level2 >= config.level_high_l - TOLERANCE:
        phase = Phase.DRAINING
    else:
        phase = Phase.FILLING
    return _actuate(ProcessState(
        t_s=0.0,
        level1_l=config.total_water_l - level2,
        level2_l=level2,
        flow_lps=0.0,
        pump_on=False,
        valve_open=False,
        temp_c=config.ambient_temp_c,
        phase=phase,
    ), config)


def _actuate(state, config):
    """Set pump and valve to the nominal commands of the state's phase."""
    pump_on = state.phase is Phase.FILLING
    return state._replace(
        pump_on=pump_on,
        valve_open=state.phase is Phase.DRAINING,
        flow_lps=config.pump_rate_lps if pump_on else 0.0,
    )


def _checked_level(value, config, name):
    capacity = config.container_capacity_l
    if value < -TOLERANCE or value > capacity + TOLERANCE:
        raise NonPhysicalError(
            '{0} would reach {1:.6g} l outside [0, {2}]; check rates and '
            'thresholds'.format(name, value, capacity))
    return min(max(value, 0.0), capacity)


def step(state, config, dt):
    """Advance the plant by one Euler step.

    Water moves with the actuator states of ``state``, so an actuator forced
    by an attack directive acts on exactly this step. Afterwards the
    controller evaluates the thresholds and re-asserts the nominal actuator
    commands of the (possibly new) phase.

    :param state: Current :class:`ProcessState`.
    :param config: A :class:`PlantConfig`.
    :param dt: Step length in seconds.
    :raises NonPhysicalError: If a level would leave ``[0, capacity]``.
    :returns: The next :class:`ProcessState`.
    """
    if dt <= 0:
        raise InvalidConfigurationError('step length must be positive')
    inflow = config.pump_rate_lps if state.pump_on else 0.0
    outflow = config.valve_rate_lps if state.valve_open else 0.0
    level2 = _checked_level(
        state.level2_l + (inflow - outflow) * dt, config, 'Container 2')
    level1 = _checked_level(
        config.total_water_l - level2, config, 'Container 1')

    phase = state.phase
    if phase is Phase.FILLING and level2 >= config.level_high_l - TOLERANCE:
        phase = Phase.DRAINING
    elif phase is Phase.DRAINING \
            and level2 <= config.level_low_l + TOLERANCE:
        phase = Phase.FILLING

    return _actuate(state._replace(
        t_s=state.t_s + dt,
        level1_l=level1,
        level2_l=level2,
        phase=phase,
    ), config)


def _switch(reading, threshold, band, latched, rising):
    """Capacitive threshold switch with a hysteresis latch."""
    if rising:
        if latched:
            return reading > threshold - band
        return reading >= threshold
    if latched:
        return reading < threshold + band
    return reading <= threshold


def read_sensors(state, config, rng, previous=None):
    """Poll all sensors of a plant instance.

    Four normal variates are drawn for every frame (flow, both levels and
    temperature), also when the noise is zero, so that random streams stay
    aligned between configurations.

    :param state: The :class:`ProcessState` to measure.
    :param config: A :class:`PlantConfig`.
    :param rng: A :class:`numpy.random.Generator`.
    :param previous: The previous :class:`SensorFrame`, used by the switch
        latches. ``None`` starts with released switches.
    :returns: A :class:`SensorFrame`.
    """
    scale = config.full_scale
    sigma = config.noise_sigma
    draws = rng.standard_normal(4)
    flow = state.flow_lps + sigma * scale['flow'] * draws[0]
    level1 = state.level1_l + sigma * scale['level1'] * draws[1]
    level2 = state.level2_l + sigma * scale['level2'] * draws[2]
    temp = state.temp_c + sigma * scale['temp'] * draws[3]

    if sigma == 0 or previous is None:
        # Exact thresholds on the true level.
        high2 = state.level2_l >= config.level_high_l
        low2 = state.level2_l <= config.level_low_l
    else:
        band = config.hysteresis * config.container_capacity_l
        high2 = _switch(level2, config.level_high_l, band,
                        previous.high2, rising=True)
        low2 = _switch(level2, config.level_low_l, band,
                       previous.low2, rising=False)

    return SensorFrame(
        t_s=state.t_s,
        flow=float(flow),
        level1=float(level1),
        level2=float(level2),
        high2=bool(high2),
        low2=bool(low2),
        valve_reported=bool(state.valve_open),
        pump_reported=bool(state.pump_on),
        temp=float(temp),
    )


def frame_count(config, duration_s):
    """Number of frames polled during ``duration_s`` seconds."""
    return int(math.ceil(duration_s * config.sample_rate_hz - TOLERANCE))


def iter_states(config, n_frames, script=None):
    """Run the plant frame by frame.

    Per frame the sensors are read, the attack directive covering the frame
    (if any) is applied to the state and the readings, and the plant steps.

    :param config: A validated :class:`PlantConfig`.
    :param n_frames: Number of frames to produce.
    :param script: Optional :class:`~invenio_icsdetect.attacks.AttackScript`.
    :returns: An iterator of ``(index, state, frame, label)`` tuples where
        ``state`` is the noiseless truth the frame was read from.
    """
    rng = np.random.default_rng(config.rng_seed)
    state = initial_state(config)
    previous = None
    for index in range(n_frames):
        state = state._replace(t_s=index / config.sample_rate_hz)
        frame = read_sensors(state, config, rng, previous)
        label = NORMAL
        directive = script.directive_at(index) if script else None
        if directive is not None:
            state, frame = apply(directive, state, frame, index)
            label = directive.label
        yield index, state, frame, label
        previous = frame
        state = step(state, config, config.dt)


def simulate(config, duration_s, script=None, plc_id=1):
    """Simulate a plant instance into a labeled trace.

    :param config: A :class:`PlantConfig`.
    :param duration_s: Duration in seconds; at least one cycle period.
    :param script: Optional attack script applied before sensor readout.
    :param plc_id: Identifier recorded on the trace.
    :returns: A :class:`~invenio_icsdetect.traces.Trace` of
        ``ceil(duration_s * sample_rate_hz)`` frames.
    """
    config.validate()
    if duration_s < config.period_s - TOLERANCE:
        raise InvalidConfigurationError(
            'duration of {0} s is shorter than one cycle of {1:.4g} s'.format(
                duration_s, config.period_s))
    n_frames = frame_count(config, duration_s)
    if script is not None:
        script.check_bounds(n_frames)

    rows = [tuple(frame) + (label, )
            for _, _, frame, label in iter_states(config, n_frames, script)]
    data = pd.DataFrame.from_records(rows, columns=COLUMNS + (LABEL_COLUMN, ))

    logger.info('PLC %s: simulated %d frames at %s Hz (%s)', plc_id, n_frames,
                config.sample_rate_hz,
                'attacked' if script else 'normal operation')
    return Trace(data, config.sample_rate_hz, plc_id=plc_id, manifest={
        'duration_s': duration_s,
        'plant': dict(config._asdict()),
        'script': script.to_dict() if script is not None else None,
        'seed': config.rng_seed,
    })
