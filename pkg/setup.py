#!/usr/bin/env python

import re

from setuptools import setup

requires = open('requirements.txt').read().strip().split('\n')
version = re.search(r"__version__ = '(.*)'",
                    open('coxring/_version.py').read()).group(1)

setup(
    name='intake-coxring',
    version=version,
    description='Exact Cox ring computations, with an Intake plugin',
    license='BSD',
    packages=['coxring'],
    entry_points={
        'console_scripts': [
            'coxring = coxring.cli:main',
        ],
        'intake.drivers': [
            'cox_hilbert = coxring.sources:HilbertBasisSource',
            'cox_torsor = coxring.sources:TorsorPointsSource',
        ]},
    package_data={'coxring': ['fixtures/*.yml']},
    include_package_data=True,
    install_requires=requires,
    extras_require={'test': ['pytest', 'pytest-cov', 'hypothesis']},
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    zip_safe=False,
)
