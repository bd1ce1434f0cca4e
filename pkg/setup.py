import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension(
            "regmirror.kernels._cykernels",
            ["src/regmirror/kernels/_cykernels.pyx"],
            extra_compile_args=["-O3"],
            include_dirs=[numpy.get_include()],
        )],
        language_level=3,
    )
except ImportError:
    # No Cython: install with the pure-numpy kernel fallback.
    ext_modules = []

setup(ext_modules=ext_modules)
