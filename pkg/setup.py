import warnings

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "fama_lab._kernels",
            ["src/fama_lab/_kernels.pyx"],
            extra_compile_args=["-O3", "-march=native", "-D_GNU_SOURCE"],
            optional=True,
        )],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # build without Cython: pure-python backend only
    warnings.warn("Cython unavailable; building without the compiled kernels")
    ext_modules = []

setup(ext_modules=ext_modules)
