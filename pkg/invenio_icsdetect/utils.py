# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Utility functions for runs and their provenance."""

import os
import time
from contextlib import contextmanager

import numpy as np

from .version import __version__


def run_timestamp():
    """Generate a run directory name based on the current time."""
    return time.strftime('%Y%m%d-%H%M%S', time.gmtime())


def build_run_dir(root, name=None):
    """Build the path of a run directory.

    :param root: Directory holding all runs.
    :param name: Name of the run; the current timestamp by default.
    """
    return os.path.join(root, name or run_timestamp())


def derive_seeds(seed, count):
    """Derive independent child seeds from a base seed.

    :param seed: Base seed.
    :param count: Number of seeds.
    :returns: List of ``count`` non-negative integers.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


@contextmanager
def stage_timer(timings, stage):
    """Record the wall-clock duration of a stage.

    :param timings: Dictionary receiving ``stage -> seconds``.
    :param stage: Name of the stage.
    """
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[stage] = round(time.perf_counter() - start, 6)


def build_manifest(command, config, seeds, inputs=None, outputs=None,
                   timings=None):
    """Build the manifest of a command run.

    :param command: Name of the CLI command.
    :param config: Resolved configuration (JSON-serializable).
    :param seeds: Seeds used by the run.
    :param inputs: Input paths.
    :param outputs: Output paths.
    :param timings: Wall-clock seconds per stage.
    """
    return {
        'command': command,
        'config': config,
        'inputs': list(inputs or []),
        'outputs': list(outputs or []),
        'seeds': seeds,
        'timings': timings or {},
        'version': __version__,
    }


def to_jsonable(value):
    """Convert tuples and numpy scalars for JSON serialization."""
    if isinstance(value, dict):
        return dict((str(k), to_jsonable(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value
