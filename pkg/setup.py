import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "noncompact._ckernels",
        ["src/noncompact/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

# NONCOMPACT_NO_EXT=1 installs the pure-Python fallback only
setup(ext_modules=[] if os.environ.get("NONCOMPACT_NO_EXT") else cythonize(extensions))
