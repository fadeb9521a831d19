#
# This file is part of python-seqattack. Python-seqattack is free software
# available under the terms of the MIT license. See the file "LICENSE" that
# was provided together with this source file for the licensing terms.
#
# Copyright (c) 2026 the python-seqattack authors. See the file "AUTHORS" for
# a complete list.

from setuptools import setup


version_info = {
    'name': 'python-seqattack',
    'version': '0.9',
    'description': 'Sequential attacks against differential-phase-shift QKD',
    'license': 'MIT',
    'classifiers': [
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: POSIX',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics'
    ]
}


if __name__ == '__main__':
    setup(
        package_dir = { '': 'lib' },
        packages = ['seqattack', 'seqattack.test'],
        install_requires = ['numpy', 'scipy', 'jsonschema'],
        extras_require = { 'test': ['pytest', 'hypothesis'] },
        entry_points = { 'console_scripts':
                         ['seqattack = seqattack.cli:main'] },
        python_requires = '>=3.6',
        **version_info
    )
