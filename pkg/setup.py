"""Builds the optional compiled kernel; a pure-Python fallback is used when it is absent."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CONERANK_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "conerank._kernels._hals_cy",
                    ["src/conerank/_kernels/_hals_cy.pyx"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
