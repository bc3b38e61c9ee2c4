"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin of the hot
kernels is selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lrlvec._kernels_cy",
                ["src/lrlvec/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                libraries=["m"],
            )
        ],
        language_level=3,
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
