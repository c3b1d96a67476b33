from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "galerkin_time._kernels._core",
                ["src/galerkin_time/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
                # Build failures are non-fatal: the package falls back to the
                # pure-Python kernels at import time.
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
