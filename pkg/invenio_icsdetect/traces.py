# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Traces as collected by the HMI, their storage and channel selection.

A run directory holds one ``plc<k>.csv`` file per PLC and a
``manifest.json`` describing every file of the directory:

.. code-block:: console

    run/20260101-120000/
    ├── manifest.json
    ├── plc1.csv
    ...
    └── plc5.csv
"""

import copy
import errno
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from .attacks import NORMAL, label_intervals
from .errors import (InvalidConfigurationError, IoFailureError,
                     SchemaMismatchError, UnknownChannelError)
from .utils import derive_seeds

logger = logging.getLogger(__name__)

COLUMNS = ('t_s', 'flow', 'level1', 'level2', 'high2', 'low2',
           'valve_reported', 'pump_reported', 'temp')
"""Sample columns in file order."""

LABEL_COLUMN = 'label'
"""Column holding the ground-truth label of each frame."""

ANALOG_COLUMNS = ('t_s', 'flow', 'level1', 'level2', 'temp')
BOOLEAN_COLUMNS = ('high2', 'low2', 'valve_reported', 'pump_reported')

MANIFEST_NAME = 'manifest.json'
"""Name of the manifest file next to the trace files."""

FLOAT_FORMAT = '%.17g'
"""Float format giving a lossless decimal round trip."""


class Trace(object):
    """Time-indexed samples of one PLC with labels and provenance."""

    def __init__(self, data, sample_rate_hz, plc_id=1, manifest=None):
        """Initialize the trace.

        :param data: A :class:`pandas.DataFrame` with the columns
            :data:`COLUMNS` followed by :data:`LABEL_COLUMN`.
        :param sample_rate_hz: Samples per second.
        :param plc_id: Identifier of the PLC instance.
        :param manifest: JSON-serializable provenance (configuration,
            attack script, seed).
        """
        expected = list(COLUMNS) + [LABEL_COLUMN]
        if list(data.columns) != expected:
            raise SchemaMismatchError(
                'trace columns {0} differ from {1}'.format(
                    list(data.columns), expected))
        if not sample_rate_hz > 0:
            raise InvalidConfigurationError('sample rate must be positive')
        self.data = data.reset_index(drop=True)
        self.sample_rate_hz = float(sample_rate_hz)
        self.plc_id = int(plc_id)
        self.manifest = manifest or {}

    def __len__(self):
        """Number of frames."""
        return len(self.data)

    def __eq__(self, other):
        """Compare traces field by field."""
        return isinstance(other, Trace) \
            and self.sample_rate_hz == other.sample_rate_hz \
            and self.plc_id == other.plc_id \
            and self.manifest == other.manifest \
            and self.data.equals(other.data)

    def __ne__(self, other):
        """Negation of ``__eq__``."""
        return not self == other

    __hash__ = None

    def __repr__(self):
        """Short description."""
        return '<Trace plc{0}: {1} frames at {2} Hz>'.format(
            self.plc_id, len(self), self.sample_rate_hz)

    @property
    def labels(self):
        """Frame labels as array."""
        return self.data[LABEL_COLUMN].to_numpy(dtype=object)

    @property
    def is_normal(self):
        """True if no frame carries an attack label."""
        return bool((self.labels == NORMAL).all())

    def column(self, name):
        """Values of one column as float array."""
        if name not in COLUMNS:
            raise UnknownChannelError('unknown channel {0!r}'.format(name))
        return self.data[name].to_numpy(dtype=float)

    def attack_intervals(self):
        """Maximal attack runs as ``(label, start, stop)`` tuples."""
        return label_intervals(self.labels)

    def slice(self, start, stop):
        """Return the frames ``[start, stop)`` as a new trace."""
        manifest = copy.deepcopy(self.manifest)
        manifest['slice'] = [int(start), int(stop)]
        return Trace(self.data.iloc[start:stop], self.sample_rate_hz,
                     plc_id=self.plc_id, manifest=manifest)

    def relabel(self, script):
        """Return a copy labeled by an attack script.

        :param script: An :class:`~invenio_icsdetect.attacks.AttackScript`.
        """
        data = self.data.copy()
        data[LABEL_COLUMN] = script.labels(len(data))
        manifest = copy.deepcopy(self.manifest)
        manifest['script'] = script.to_dict()
        return Trace(data, self.sample_rate_hz, plc_id=self.plc_id,
                     manifest=manifest)

    def to_csv(self, path):
        """Write the samples to a CSV file (no manifest)."""
        self.data.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                         lineterminator='\n')


class ChannelSelection(object):
    """Ordered list of trace columns fed to a detector."""

    def __init__(self, names):
        """Initialize the selection.

        :param names: Iterable of column names.
        """
        self.names = tuple(names)
        if not self.names:
            raise InvalidConfigurationError('select at least one channel')

    @classmethod
    def default(cls, include_valve=False):
        """Water flow and Container 1 level, optionally the valve state."""
        names = ['flow', 'level1']
        if include_valve:
            names.append('valve_reported')
        return cls(names)

    def __len__(self):
        """Number of channels."""
        return len(self.names)

    def __iter__(self):
        """Iterate over the names."""
        return iter(self.names)

    def __eq__(self, other):
        """Compare selections by names."""
        return isinstance(other, ChannelSelection) \
            and self.names == other.names

    __hash__ = None

    def __repr__(self):
        """Comma separated names."""
        return ','.join(self.names)


def select(trace, channels=None):
    """Extract detector inputs from a trace.

    :param trace: A :class:`Trace`.
    :param channels: A :class:`ChannelSelection`; flow and Container 1
        level by default.
    :returns: Float array of shape ``(frames, channels)``.
    """
    channels = channels or ChannelSelection.default()
    unknown = [name for name in channels if name not in COLUMNS]
    if unknown:
        raise UnknownChannelError(
            'unknown channel(s) {0}; choose from {1}'.format(
                ', '.join(unknown), ', '.join(COLUMNS)))
    return np.column_stack([trace.column(name) for name in channels])


def _manifest_path(path):
    return os.path.join(os.path.dirname(os.path.abspath(path)),
                        MANIFEST_NAME)


def read_manifest(directory):
    """Load the manifest of a run directory."""
    path = os.path.join(directory, MANIFEST_NAME)
    try:
        with open(path, 'r') as fp:
            return json.load(fp)
    except (OSError, IOError) as e:
        if getattr(e, 'errno', None) == errno.ENOENT:
            raise SchemaMismatchError(
                'missing manifest {0}'.format(path))
        raise IoFailureError('cannot read {0}: {1}'.format(path, e))
    except ValueError as e:
        raise SchemaMismatchError(
            'manifest {0} is not valid JSON: {1}'.format(path, e))


def write_manifest(directory, manifest):
    """Write the manifest of a run directory."""
    path = os.path.join(directory, MANIFEST_NAME)
    try:
        with open(path, 'w') as fp:
            json.dump(manifest, fp, indent=2, sort_keys=True)
            fp.write('\n')
    except (OSError, IOError) as e:
        raise IoFailureError('cannot write {0}: {1}'.format(path, e))


def _entry(trace):
    return {
        'manifest': trace.manifest,
        'n_frames': len(trace),
        'plc_id': trace.plc_id,
        'sample_rate_hz': trace.sample_rate_hz,
    }


def save(trace, path):
    """Save a trace as CSV and register it in the directory manifest.

    :param trace: A :class:`Trace`.
    :param path: Target CSV path.
    """
    directory = os.path.dirname(os.path.abspath(path))
    try:
        manifest = read_manifest(directory)
    except SchemaMismatchError:
        manifest = {}
    try:
        trace.to_csv(path)
    except (OSError, IOError) as e:
        raise IoFailureError('cannot write {0}: {1}'.format(path, e))
    manifest.setdefault('traces', {})[os.path.basename(path)] = \
        _entry(trace)
    write_manifest(directory, manifest)


def load(path):
    """Load a trace saved with :func:`save` or :func:`write_run`.

    :param path: CSV path; the manifest must be in the same directory.
    :raises SchemaMismatchError: On a missing manifest entry or unexpected
        columns.
    :raises IoFailureError: If the file cannot be read.
    """
    manifest = read_manifest(os.path.dirname(os.path.abspath(path)))
    entry = manifest.get('traces', {}).get(os.path.basename(path))
    if entry is None:
        raise SchemaMismatchError(
            '{0} is not listed in its manifest'.format(path))
    try:
        data = pd.read_csv(path, float_precision='round_trip')
    except (OSError, IOError) as e:
        raise IoFailureError('cannot read {0}: {1}'.format(path, e))
    except ValueError as e:
        raise SchemaMismatchError('cannot parse {0}: {1}'.format(path, e))
    expected = list(COLUMNS) + [LABEL_COLUMN]
    if list(data.columns) != expected:
        raise SchemaMismatchError(
            '{0} has columns {1}, expected {2}'.format(
                path, list(data.columns), expected))
    for name in BOOLEAN_COLUMNS:
        if data[name].dtype != bool:
            raise SchemaMismatchError(
                'column {0} of {1} is not boolean'.format(name, path))
    try:
        data = data.astype(dict((name, 'float64') for name in ANALOG_COLUMNS))
    except ValueError as e:
        raise SchemaMismatchError('cannot parse {0}: {1}'.format(path, e))
    data[LABEL_COLUMN] = data[LABEL_COLUMN].astype(str)
    return Trace(data, entry['sample_rate_hz'], plc_id=entry['plc_id'],
                 manifest=entry['manifest'])


def _fleet_config(base_config, index, seeds, jitter):
    factor = 1.0 + jitter[index % len(jitter)]
    return base_config._replace(
        pump_rate_lps=base_config.pump_rate_lps * factor,
        rng_seed=seeds[index])


def generate_fleet(base_config, script, attacked_plc, duration_s, size=5,
                   jitter=(-0.02, -0.01, 0.0, 0.01, 0.02), workers=1):
    """Simulate the PLC fleet polled by the HMI.

    :param base_config: :class:`~invenio_icsdetect.process.PlantConfig`
        shared by all instances; its seed is the base of the instance seeds.
    :param script: Attack script for ``attacked_plc`` or ``None``.
    :param attacked_plc: 1-based id of the attacked instance.
    :param duration_s: Duration of every trace.
    :param size: Number of instances.
    :param jitter: Relative pump rate deviation per instance.
    :param workers: Threads used to simulate instances concurrently.
    :returns: List of :class:`Trace` ordered by PLC id.
    """
    from .process import simulate

    if not 1 <= attacked_plc <= size:
        raise InvalidConfigurationError(
            'attacked PLC must be within 1..{0}, got {1}'.format(
                size, attacked_plc))
    seeds = derive_seeds(base_config.rng_seed, size)

    def _run(index):
        plc_id = index + 1
        trace = simulate(
            _fleet_config(base_config, index, seeds, jitter), duration_s,
            script=script if plc_id == attacked_plc else None,
            plc_id=plc_id)
        trace.manifest['base_seed'] = base_config.rng_seed
        return trace

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_run, range(size)))
    return [_run(index) for index in range(size)]


def write_run(traces, run_dir, run_info=None):
    """Write a fleet into a run directory.

    :param traces: Iterable of :class:`Trace`.
    :param run_dir: Target directory; created if missing.
    :param run_info: Run-level manifest entries.
    :returns: List of written CSV paths.
    """
    try:
        os.makedirs(run_dir, exist_ok=True)
    except (OSError, IOError) as e:
        raise IoFailureError('cannot create {0}: {1}'.format(run_dir, e))
    manifest = {'run': run_info or {}, 'traces': {}}
    paths = []
    for trace in traces:
        name = 'plc{0}.csv'.format(trace.plc_id)
        path = os.path.join(run_dir, name)
        try:
            trace.to_csv(path)
        except (OSError, IOError) as e:
            raise IoFailureError('cannot write {0}: {1}'.format(path, e))
        manifest['traces'][name] = _entry(trace)
        paths.append(path)
    write_manifest(run_dir, manifest)
    logger.info('wrote %d traces to %s', len(paths), run_dir)
    return paths
