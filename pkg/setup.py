"""Builds the optional compiled kernel. The package works without it: the
feature-hashing hot loop falls back to a pure-Python twin selected at import."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "chefmind.kernels._native",
                ["src/chefmind/kernels/_native.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
