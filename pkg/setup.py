"""Build the optional compiled kernels.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so a missing compiler or Cython
only costs speed, never correctness.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fraudlex/_kernels/_native.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
