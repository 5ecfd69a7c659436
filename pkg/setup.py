"""Build the optional compiled enumeration kernel.

The package works without it; ``incpcst.enumeration`` falls back to the
pure-Python kernel when ``incpcst._kernel`` cannot be imported.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler / no Cython
            self.warn(f"compiled kernel not built, using pure Python: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self.warn(f"compiled kernel not built, using pure Python: {exc}")


def extensions():
    if os.environ.get("INCPCST_NO_EXTENSION"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "incpcst._kernel",
        ["src/incpcst/_kernel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
