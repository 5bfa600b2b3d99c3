"""Build the optional Cython kernel; the package falls back to pure Python without it."""
import os
import sys

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("SUBSHIFT_LAB_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"warning: skipping compiled kernels ({exc})", file=sys.stderr)
        return []
    ext = Extension(
        "subshift_lab._kernels",
        ["src/subshift_lab/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
