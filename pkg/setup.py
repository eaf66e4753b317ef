"""Build script: compiles the optional hash-kernel extension.

The extension accelerates the SHA-256 / RIPEMD-160 inner loops.  If Cython
or a C compiler is unavailable the build silently skips it and the package
falls back to the pure-Python kernels at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ags/crypto/_corehash.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
