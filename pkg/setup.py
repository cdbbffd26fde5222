"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a pure-Python
backend is selected at import time); compiling `anosovlab._kernels_c`
just makes the hot loops fast. Set ANOSOVLAB_NO_EXTENSION=1 to skip
the build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ANOSOVLAB_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "anosovlab._kernels_c",
                    ["src/anosovlab/_kernels_c.pyx"],
                    language="c++",
                    optional=True,
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
