"""Build script for the optional compiled orbit kernel.

The extension is an accelerator only: if it fails to build or import,
the package falls back to the pure-Python kernel with identical numerics.
Floating-point contraction is disabled so both kernels execute the same
IEEE-754 operation sequence and produce bitwise-equal orbits.
"""

from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "quatquad._kernels._core",
        sources=["src/quatquad/_kernels/_core.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
