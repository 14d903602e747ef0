"""Build script for the optional compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile degrades to a pure-Python install
instead of aborting.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/pricebound/_kernels.pyx"],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: compiled kernels disabled ({exc}); using pure-Python fallback")
    ext_modules = []

setup(ext_modules=ext_modules)
