"""Build script: compiles the optional Cython solver core.

The package works without the extension (a pure-Python solver core is
selected at import time), so a failed compile only costs speed.
"""

import os

from setuptools import setup

PYX = "src/rangeforge/solver/_core.pyx"

ext_modules = []
if os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [PYX],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
