# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.


"""Utils tests."""

import json
import re

import numpy as np
import pytest
from mock import patch

from invenio_icsdetect import __version__
from invenio_icsdetect.utils import (build_manifest, build_run_dir,
                                     derive_seeds, run_timestamp, stage_timer,
                                     to_jsonable)


def test_run_timestamp():
    """Test the run directory name."""
    assert re.match(r'^\d{8}-\d{6}$', run_timestamp())


def test_build_run_dir():
    """Test run directory paths."""
    assert build_run_dir('runs', 'first') == 'runs/first'
    with patch('invenio_icsdetect.utils.run_timestamp',
               return_value='20260101-120000'):
        assert build_run_dir('runs') == 'runs/20260101-120000'


def test_derive_seeds():
    """Test that child seeds are stable and distinct."""
    seeds = derive_seeds(42, 5)
    assert seeds == derive_seeds(42, 5)
    assert len(set(seeds)) == 5
    assert all(isinstance(seed, int) and seed >= 0 for seed in seeds)
    assert derive_seeds(43, 5) != seeds
    assert derive_seeds(42, 3) == seeds[:3]


def test_stage_timer():
    """Test that durations are recorded even when a stage fails."""
    timings = {}
    with stage_timer(timings, 'ok'):
        pass
    with pytest.raises(RuntimeError):
        with stage_timer(timings, 'failed'):
            raise RuntimeError()
    assert set(timings) == {'ok', 'failed'}
    assert all(value >= 0 for value in timings.values())


def test_build_manifest():
    """Test command manifests."""
    manifest = build_manifest('detect', {'window': 300}, {'base': 42},
                              inputs=('plc3.csv', ))
    assert manifest == {
        'command': 'detect',
        'config': {'window': 300},
        'inputs': ['plc3.csv'],
        'outputs': [],
        'seeds': {'base': 42},
        'timings': {},
        'version': __version__,
    }


def test_to_jsonable():
    """Test conversion of numpy values and tuples."""
    value = to_jsonable({
        'channels': ('flow', 'level1'),
        'cutoff': np.float64(1.5),
        'span': np.array([0, 10]),
        1: [np.int64(3)],
    })
    assert value == {'channels': ['flow', 'level1'], 'cutoff': 1.5,
                     'span': [0, 10], '1': [3]}
    assert json.loads(json.dumps(value)) == value
