from setuptools import Extension, setup

# The compiled kernel is optional: when Cython (or a C compiler) is not
# available the package installs anyway and rfnode.kernels falls back to
# the pure-Python twin at import time.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("rfnode._kernel", ["src/rfnode/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
