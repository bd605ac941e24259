"""Build script: compiles the optional Cython kernel core.

The extension is an accelerator only; if Cython, numpy headers, or a C
compiler are unavailable the install proceeds and the package falls back
to the pure-numpy backend at import time.  Set COSMOHARVEST_NO_EXT=1 to
skip the extension build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing etc.
            print(f"warning: extension build skipped ({exc}); "
                  "the pure-python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "the pure-python backend will be used")


def extensions():
    if os.environ.get("COSMOHARVEST_NO_EXT") == "1":
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "cosmoharvest._kern_cy",
        ["src/cosmoharvest/_kern_cy.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
