# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

r"""Attack detection on industrial control system traces.

The module simulates a small water-treatment plant controlled by a fleet
of PLCs, injects valve attacks into one PLC and detects them with two
unsupervised detectors: a Matrix Profile discord search and an LSTM
predictor.

Initialization
--------------

Install the extension on a Flask application:

.. code-block:: python

    # app.py
    from flask import Flask
    from invenio_icsdetect import InvenioICSDetect

    app = Flask('myapp')
    InvenioICSDetect(app)

All settings live in :mod:`invenio_icsdetect.config` and can be overridden
through the application configuration.

Simulating a fleet
~~~~~~~~~~~~~~~~~~

The ``icsdetect`` command group is available through the Flask CLI and as
a standalone console script:

.. code-block:: console

   $ icsdetect simulate --scenario canonical --output-dir run/canonical
   $ icsdetect simulate --scenario none --output-dir run/normal

Each run directory holds one CSV file per PLC plus a ``manifest.json``
with sample rates, seeds and attack scripts.

Detecting attacks
~~~~~~~~~~~~~~~~~

.. code-block:: console

   $ icsdetect detect --run-dir run/canonical --method mp --svg
   $ icsdetect detect --train run/normal/plc3.csv \
       --test run/canonical/plc3.csv --method lstm

Each detector writes a JSON report, a plain-text table, a results CSV and
optionally an SVG chart. ``icsdetect eval`` applies a different threshold
to an existing results file and ``icsdetect acf`` estimates the process
period of a trace.

Using the API
~~~~~~~~~~~~~

The pipelines are plain functions:

.. code-block:: python

    from invenio_icsdetect.attacks import canonical_scenario
    from invenio_icsdetect.pipeline import run_matrix_profile
    from invenio_icsdetect.process import PlantConfig, simulate

    trace = simulate(PlantConfig(), 3600, script=canonical_scenario())
    result = run_matrix_profile(trace)
    print(result.report.to_table())
"""

from .ext import InvenioICSDetect
from .proxies import current_icsdetect
from .version import __version__

__all__ = (
    '__version__',
    'InvenioICSDetect',
    'current_icsdetect',
)
