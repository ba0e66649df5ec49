from setuptools import setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementation in flatsphere._kernels._ref when the extension is missing.
ext_modules = []
try:
    import os

    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    if not os.path.exists("src/flatsphere/_kernels/_fast.pyx"):
        raise ImportError("kernel sources absent")
    ext_modules = cythonize(
        [
            Extension(
                "flatsphere._kernels._fast",
                sources=["src/flatsphere/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    import warnings

    warnings.warn("cython/numpy unavailable: building without compiled kernels")

setup(ext_modules=ext_modules)
