"""Build the optional compiled theta kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the Cython kernel just makes the hot theta sums
faster.  Run ``python bench/bench_theta.py`` after installing to compare.
"""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "g2ell._theta_cy",
                sources=["src/g2ell/_theta_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-ffast-math"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
