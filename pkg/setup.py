"""Build script for the optional compiled kernels.

The package is pure Python; the Cython extension only accelerates the two
enumeration hot loops. If Cython or a C compiler is unavailable the build
falls back to the pure-Python kernels, selected automatically at import.
Set COREMATCH_PURE=1 to skip the extension build entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Treat extension build failures as non-fatal."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: failed to compile {ext.name} ({exc}); "
                  "pure-Python kernels will be used")


ext_modules = []
if os.environ.get("COREMATCH_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/corematch/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:  # pragma: no cover - toolchain dependent
        pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
