# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Application factory of the standalone ``icsdetect`` command."""

import os

from flask import Flask

from .ext import InvenioICSDetect


def create_app(*args, **config):
    """Create a Flask application with the extension installed.

    A configuration file named by the ``ICSDETECT_CONFIG`` environment
    variable is loaded before the defaults are filled in.

    :param config: Configuration values overriding everything else.
    """
    app = Flask('invenio_icsdetect')
    path = os.environ.get('ICSDETECT_CONFIG')
    if path:
        app.config.from_pyfile(os.path.abspath(path))
    app.config.update(config)
    InvenioICSDetect(app)
    return app
