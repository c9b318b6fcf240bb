# -*- coding: utf-8 -*-
# Brief: adaptive finite elements for optimal control with variable energy regularization
from __future__ import print_function

import sys

from setuptools import setup, find_packages

from ocpfem import __version__

if sys.version_info < (3,):
    sys.exit('Sorry, Python3 is required for ocpfem.')

with open('README.md', 'r', encoding='utf-8') as f:
    readme = f.read()

with open('requirements.txt', 'r', encoding='utf-8') as f:
    reqs = f.read()

setup(
    name='ocpfem',
    version=__version__,
    description='Adaptive P1 finite elements for tracking-type optimal control with variable energy regularization',
    long_description=readme,
    long_description_content_type='text/markdown',
    license="Apache 2.0",
    zip_safe=False,
    python_requires='>=3.8',
    classifiers=[
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3 :: Only",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    platforms=["Windows", "Linux", "Mac OS-X", "Unix"],
    keywords='finite element,optimal control,adaptive refinement,newest vertex bisection,krylov,bramble-pasciak',
    install_requires=reqs.strip().split('\n'),
    extras_require={'cholmod': ['scikit-sparse'], 'test': ['pytest']},
    packages=find_packages(exclude=['tests']),
    package_dir={'ocpfem': 'ocpfem'},
    package_data={'ocpfem': ['configs/*.yml', '../requirements.txt', '../README.*']},
    entry_points={'console_scripts': ['ocpfem = ocpfem.bench.cli:main']},
)
