import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: the pure-numpy backend is used instead
    cythonize = None

ext_modules = []
if cythonize is not None and os.environ.get("GF2PLS_NO_EXT") != "1":
    ext_modules = cythonize(
        [
            Extension(
                "gf2pls._core",
                ["src/gf2pls/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-march=native"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
