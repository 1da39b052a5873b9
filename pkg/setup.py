"""Build script for the optional compiled kernel.

The package is fully functional without the extension (a pure-python
backend is selected at import time), so a missing compiler or Cython
only costs speed, never a failed install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if we can, fall back to pure python if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled kernel build: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available, building without compiled kernel")
        return []
    # fp-contract off: the compiled kernels must stay bit-identical to the
    # numpy backend, so fused multiply-adds are not allowed
    ext = Extension(
        "probcore._kernels",
        ["src/probcore/_kernels.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
