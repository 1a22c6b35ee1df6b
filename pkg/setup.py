# Builds the optional compiled kernel. The package works without it: when the
# extension is absent at import time, dataprio._kernels falls back to the pure
# Python implementation with identical numerical behaviour.
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("dataprio._kernels._native", ["src/dataprio/_kernels/_native.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
