"""Build script for the compiled scan-field kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed Cython build only costs speed, not correctness.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "searchtrack._scanfield",
                ["src/searchtrack/_scanfield.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
