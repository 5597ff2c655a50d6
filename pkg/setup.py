import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    USE_CYTHON = True
except ImportError:
    USE_CYTHON = False

# SYSCOW_PURE=1 skips the compiled kernels entirely (fallback is used at import).
PURE = os.environ.get("SYSCOW_PURE", "") == "1"

extensions = []
if USE_CYTHON and not PURE:
    import numpy as np

    extensions = cythonize(
        [
            Extension(
                "syscow._ckernels",
                ["src/syscow/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=extensions)
