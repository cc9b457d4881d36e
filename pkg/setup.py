"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension holding the hot
numerical loops (fixed-step RK4 propagation, 4x4 Hermitian Jacobi
eigensolver).  If the extension cannot be built the install still
succeeds and the package falls back to the pure-Python twin kernels at
import time.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible, warn and continue if not."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "compiled kernels unavailable (%s); using pure-Python fallback" % exc
        )


ext_modules = []
cmdclass = {}
if os.environ.get("SPINPAIR_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "spinpair._kernels._cykernels",
                    ["src/spinpair/_kernels/_cykernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass=cmdclass)
