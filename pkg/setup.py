"""Build script for the optional compiled kernel.

The package is pure Python by default; if Cython and a C compiler are
available, ``petrikit._core`` is built and picked up at import time in
place of the pure fallback ``petrikit._core_py``.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "petrikit._core",
                ["src/petrikit/_core.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
