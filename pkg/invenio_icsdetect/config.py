# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Configuration options for Invenio-ICSDetect.

The documentation for the configuration is in docs/configuration.rst.
"""

#
# Plant configuration
#

ICSDETECT_PLANT_CONTAINER_CAPACITY_L = 10.0
"""Capacity of each container in liters."""

ICSDETECT_PLANT_LEVEL_LOW_L = 2.0
"""Level of Container 2 (liters) at which the pump starts filling."""

ICSDETECT_PLANT_LEVEL_HIGH_L = 8.0
"""Level of Container 2 (liters) at which filling stops and draining starts.
"""

ICSDETECT_PLANT_PUMP_RATE_LPS = 0.10
"""Flow of pump P101 in liters per second while it runs."""

ICSDETECT_PLANT_VALVE_RATE_LPS = 1.0 / 15.0
"""Flow through valve M102 in liters per second while it is open.

Together with the pump rate and the level band this yields a 60 s filling
phase, a 90 s draining phase and thus a 150 s process cycle. It must stay
below the pump rate, otherwise the open valve attack stalls the filling.
"""

ICSDETECT_PLANT_TOTAL_WATER_L = 10.0
"""Volume of water shared by both containers (closed system)."""

ICSDETECT_PLANT_SAMPLE_RATE_HZ = 2.0
"""Polling rate of the HMI, in samples per second."""

ICSDETECT_PLANT_NOISE_SIGMA = 0.005
"""Standard deviation of the analog sensor noise, as fraction of full scale.
"""

ICSDETECT_PLANT_AMBIENT_TEMP_C = 21.0
"""Water temperature measured by the PT100 sensor B104."""

ICSDETECT_PLANT_HYSTERESIS = 0.01
"""Hysteresis band of the capacitive switches B113/B114.

Expressed as fraction of the container capacity.
"""

ICSDETECT_PLANT_INITIAL_LEVEL2_L = None
"""Initial level of Container 2.

``None`` starts the plant at the low threshold, i.e. in its steady cycle.
Any other value makes the first cycle a settling transient.
"""

ICSDETECT_SEED = 42
"""Base seed of every random stream (sensor noise, fleet, training)."""

#
# Fleet configuration
#

ICSDETECT_FLEET_SIZE = 5
"""Number of PLC instances polled by the HMI."""

ICSDETECT_FLEET_RATE_JITTER = (-0.02, -0.01, 0.0, 0.01, 0.02)
"""Relative pump rate deviation of each fleet instance.

Instance ``k`` (1-based) uses entry ``k - 1``; the list is cycled when the
fleet is larger than the list.
"""

ICSDETECT_FLEET_ATTACKED_PLC = 3
"""PLC that receives the attack script by default."""

#
# Detector inputs
#

ICSDETECT_CHANNELS = ('flow', 'level1')
"""Trace columns fed to the detectors (water flow and Container 1 level)."""

ICSDETECT_INCLUDE_VALVE_REPORTED = False
"""Append the reported valve state to the detector inputs."""

#
# Matrix Profile
#

ICSDETECT_MP_WINDOW = None
"""Window size ``m`` in samples; ``None`` estimates it by autocorrelation."""

ICSDETECT_MP_EXCLUSION_RADIUS = None
"""Exclusion zone radius in samples; ``None`` means ``ceil(m / 2)``."""

ICSDETECT_MP_STD_EPSILON = 1e-8
"""Minimum window standard deviation, as fraction of the channel range."""

ICSDETECT_ACF_PROMINENCE = 0.2
"""Minimum normalized autocorrelation of an accepted period peak."""

#
# LSTM predictor
#

ICSDETECT_LSTM_LAYER_SIZES = (64, 64, 32)
"""Widths of the stacked LSTM layers.

Wider stacks such as ``(350, 350, 250)`` model long traces better; the default
keeps training on a desktop within minutes.
"""

ICSDETECT_LSTM_INPUT_LEN = 300
"""Number of past samples fed per prediction."""

ICSDETECT_LSTM_LEARNING_RATE = 0.001
"""Optimizer learning rate."""

ICSDETECT_LSTM_EPOCHS = 25
"""Number of passes over the training trace."""

ICSDETECT_LSTM_BATCH_SIZE = 32
"""Number of sequences per parameter update."""

ICSDETECT_LSTM_STRIDE = 10
"""Distance between the start frames of two training sequences.

``1`` uses every window of the training trace.
"""

ICSDETECT_LSTM_OPTIMIZER = 'adam'
"""Optimizer, either ``'adam'`` or ``'sgd'``."""

ICSDETECT_LSTM_CLIP_NORM = 1.0
"""Upper bound of the global gradient norm per update; ``0`` disables it."""

ICSDETECT_LSTM_LR_DECAY = 0.05
"""Inverse-time decay of the learning rate per epoch."""

#
# Thresholds and evaluation
#

ICSDETECT_THRESHOLD_METHOD = 'mean+kstd'
"""Cutoff calibration: ``'mean+kstd'``, ``'quantile'`` or ``'fixed'``."""

ICSDETECT_THRESHOLD_K = 4.0
"""Number of standard deviations above the mean for ``'mean+kstd'``."""

ICSDETECT_THRESHOLD_QUANTILE = 0.999
"""Quantile for ``'quantile'`` (nearest-rank)."""

ICSDETECT_THRESHOLD_VALUE = None
"""Cutoff used verbatim for ``'fixed'``."""

ICSDETECT_MIN_DURATION = 4
"""Minimum length in frames of a flagged interval."""

ICSDETECT_GAP_MERGE = None
"""Flagged runs closer than this many frames are merged.

``None`` means a quarter of the detector window.
"""

ICSDETECT_TRANSITION_MARGIN = None
"""Frames added around each attack when matching flags.

``None`` means the detector window.
"""

#
# Run layout
#

ICSDETECT_RUN_ROOT = 'run'
"""Directory below which ``simulate`` creates timestamped run directories."""
