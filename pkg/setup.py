#!/usr/bin/env python

from setuptools import setup

# Load the __version__ variable without importing the package already
exec(open("pyflatsu2/version.py").read())

# Get dependencies
with open("requirements.txt") as f:
    install_requires = f.read().splitlines()

setup(
    name="flatsu2",
    version=__version__,
    description="Betti numbers of moduli spaces of flat SU(2) connections on punctured surfaces",
    license="GPL v.3",
    packages=["pyflatsu2", "pyflatsu2.tests"],
    install_requires=install_requires,
    extras_require={"test": ["pytest", "hypothesis"]},
    entry_points={"console_scripts": ["flatsu2=pyflatsu2.cli:console"]},
    zip_safe=False,
)
