# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Version information for Invenio-ICSDetect.

This file is imported by ``invenio_icsdetect.__init__``,
and parsed by ``setup.py``.
"""

__version__ = '0.1.0'
