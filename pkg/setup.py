"""Build hook for the optional compiled search kernel.

The package works without the extension; dendrotile.kernel falls back to the
pure-Python kernel when the import fails.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("dendrotile._kernel_c", ["src/dendrotile/_kernel_c.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
