import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the speedup extension when possible, fall back silently.

    The package is fully functional on the pure-Python kernel; set
    MSN_REQUIRE_EXT=1 to turn build failures into hard errors.
    """

    def run(self):
        try:
            super().run()
        except Exception:
            if os.environ.get("MSN_REQUIRE_EXT"):
                raise

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception:
            if os.environ.get("MSN_REQUIRE_EXT"):
                raise


ext_modules = []
if not os.environ.get("MSN_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("msn._kernel._speed", ["src/msn/_kernel/_speed.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
