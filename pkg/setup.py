"""Build script: compiles the Cython kernel extension when possible.

The package is fully functional without the extension; cuntzmc.kernels
falls back to the pure-Python twin at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cuntzmc._kernels_cy", ["src/cuntzmc/_kernels_cy.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
