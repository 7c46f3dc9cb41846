# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Invenio module for attack detection on industrial control traces."""

import os

from setuptools import find_packages, setup

readme = open('README.rst').read()
history = open('CHANGES.rst').read()

tests_require = [
    'hypothesis>=6.0.0',
    'mock>=1.3.0',
    'pytest-invenio>=1.4.0',
]

extras_require = {
    'docs': [
        'Sphinx>=3',
    ],
    # SVG charts of detector results
    'plot': [
        'matplotlib>=3.5',
    ],
    'tests': tests_require,
}

extras_require['all'] = []
for name, reqs in extras_require.items():
    if name[0] == ':':
        continue
    extras_require['all'].extend(reqs)


setup_requires = [
    'pytest-runner>=2.6.2',
]

install_requires = [
    'click>=7.0',
    'invenio-base>=1.2.3',
    'numpy>=1.22',
    'pandas>=1.5',
    'scipy>=1.7',
]

packages = find_packages(exclude=['tests', 'tests.*'])

# Get the version string. Cannot be done with import!
g = {}
with open(os.path.join('invenio_icsdetect', 'version.py'), 'rt') as fp:
    exec(fp.read(), g)
    version = g['__version__']

setup(
    name='invenio-icsdetect',
    version=version,
    description=__doc__,
    long_description=readme + '\n\n' + history,
    keywords='invenio ics scada attack detection matrix-profile lstm',
    license='MIT',
    author='Invenio-ICSDetect contributors',
    packages=packages,
    zip_safe=False,
    include_package_data=True,
    platforms='any',
    entry_points={
        'console_scripts': [
            'icsdetect = invenio_icsdetect.cli:main',
        ],
        'invenio_base.apps': [
            'invenio_icsdetect = invenio_icsdetect:InvenioICSDetect',
        ],
    },
    extras_require=extras_require,
    install_requires=install_requires,
    setup_requires=setup_requires,
    tests_require=tests_require,
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Topic :: Scientific/Engineering',
        'Topic :: Security',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: Implementation :: CPython',
        'Development Status :: 3 - Alpha',
    ],
)
