import os

import numpy as np
from setuptools import Extension, setup

# CURVPEND_NO_EXT=1 skips the compiled core; the package then runs on the
# pure-Python kernels.
ext_modules = []
if not os.environ.get("CURVPEND_NO_EXT"):
    from Cython.Build import cythonize

    extensions = [
        Extension(
            "curvpend._ckernels",
            ["src/curvpend/_ckernels.pyx"],
            include_dirs=[np.get_include()],
            # the C kernels must round exactly like the Python fallback: no FMA
            # contraction, and no fusing sin/cos pairs into sincos(), whose
            # last bit can differ from separate libm calls
            extra_compile_args=[
                "-O2",
                "-ffp-contract=off",
                "-fno-fast-math",
                "-fno-builtin-sin",
                "-fno-builtin-cos",
            ],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    ext_modules = cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
