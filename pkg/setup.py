"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: epistral._kernels
falls back to the pure-Python implementation at import time. Building with
Cython just makes the hot loops (greedy feed selection, leader clustering)
faster.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "epistral._kernels._native",
                ["src/epistral/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython available: install the pure-Python package as-is.
    pass

setup(ext_modules=ext_modules)
