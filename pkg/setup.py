import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "slavespin._kernels._core",
                ["src/slavespin/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-python kernels are selected at import time when the compiled
    # extension is unavailable, so a cython-less build is still functional.
    extensions = []

setup(ext_modules=extensions)
