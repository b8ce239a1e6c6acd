"""Build the optional compiled jet kernel.

The package works without it (pure-Python fallback); a failed compile
only prints a warning.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("lagspheres._jetcore", ["src/lagspheres/_jetcore.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("Cython not found; installing without the compiled kernel", file=sys.stderr)


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"warning: compiled kernel not built ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
