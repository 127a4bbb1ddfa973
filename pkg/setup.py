"""Build script: compiles the optional bit-kernel extension when Cython is
available.  The package is fully functional without it (pure-Python kernels
are selected at import time)."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ecscipher._kernels",
                sources=["src/ecscipher/_kernels.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
