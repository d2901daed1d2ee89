"""Build the optional Cython kernels; the package falls back to numpy if this fails."""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("CUBIK_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "cubik._kernels._ckernels",
                    ["src/cubik/_kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"cubik: skipping compiled kernels ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
