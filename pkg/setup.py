#!/usr/bin/env python3
# -*- coding: ascii -*-
from setuptools import setup, find_packages
import io

version = '0.1.0'
license = "MIT License"


with io.open('README.rst', encoding='ascii') as fp:
    long_description = fp.read()

setup(
    packages=find_packages(exclude=["examples", "examples.*"]),
    include_package_data=True,
    name='PyActiveSense',
    version=version,
    description='Plan and simulate active sub-Nyquist spectrum sensing with group tests',
    long_description=long_description,
    author="PyActiveSense developers",
    license=license,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python',
        "Programming Language :: Python :: 3",
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering',
    ],
    python_requires=">=3.8",
    install_requires=["six >= 1.10.0", "numpy >= 1.17", "scipy >= 1.4"],
    entry_points={"console_scripts": ["activesense = activesense.__main__:main"]},
    test_suite="test_activesense",
)
