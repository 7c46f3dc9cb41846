# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Invenio-ICSDetect errors.

Every error carries the exit code the command line interface terminates
with, so the CLI can map whole families at once.
"""


class ICSDetectError(Exception):
    """Base class for all errors raised by this module."""

    exit_code = 1


class InvalidConfigurationError(ICSDetectError, ValueError):
    """Raised when a configuration object violates its invariants."""

    exit_code = 2


class DataError(ICSDetectError):
    """Raised when simulated or stored data cannot be used."""

    exit_code = 3


class NonPhysicalError(DataError):
    """Raised when a simulation step would need clamping of a level."""


class IoFailureError(DataError):
    """Raised when a trace or manifest cannot be read or written."""


class SchemaMismatchError(DataError):
    """Raised when a stored trace does not follow the expected layout."""


class UnknownChannelError(DataError):
    """Raised when a channel selection names a column a trace lacks."""


class DetectorError(ICSDetectError):
    """Raised when a detector cannot produce a result."""

    exit_code = 4


class DegenerateWindowError(DetectorError):
    """Raised when a subsequence has (almost) zero standard deviation."""

    def __init__(self, index, std=0.0):
        """Initialize the error.

        :param index: Start index of the first degenerate window.
        :param std: Standard deviation found in that window.
        """
        self.index = index
        self.std = std
        super(DegenerateWindowError, self).__init__(
            'window at index {0} has standard deviation {1:.3g}; choose a '
            'window size so that every window varies'.format(index, std))


class NoPeriodicityError(DetectorError):
    """Raised when the autocorrelation shows no prominent period."""


class NonFiniteLossError(DetectorError):
    """Raised when training diverges."""

    def __init__(self, epoch, batch, loss):
        """Initialize the error.

        :param epoch: Epoch (1-based) in which the loss diverged.
        :param batch: Batch index within the epoch.
        :param loss: The offending loss value.
        """
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
        super(NonFiniteLossError, self).__init__(
            'training loss became {0} in epoch {1}, batch {2}; lower the '
            'learning rate'.format(loss, epoch, batch))


class ShapeMismatchError(DetectorError):
    """Raised when input data does not fit a trained model."""


class InsufficientCalibrationError(DetectorError):
    """Raised when a threshold cannot be calibrated on the given span."""
