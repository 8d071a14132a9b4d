"""Build script for the optional compiled ingest kernel.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes turnstile ingestion much faster.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print("=" * 72)
        print("WARNING: compiled ingest kernel not built (%s)." % exc)
        print("Falling back to the pure NumPy kernel at import time.")
        print("=" * 72)


def make_extensions():
    if os.environ.get("LOGSKETCH_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "logsketch._ingest",
        sources=["src/logsketch/_ingest.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "embedsignature": True,
        },
    )


setup(ext_modules=make_extensions(), cmdclass={"build_ext": optional_build_ext})
