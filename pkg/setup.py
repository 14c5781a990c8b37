from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("verdd.fst._kernel", ["src/verdd/fst/_kernel.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    # No Cython available: install pure-Python only, the lookup kernel
    # falls back to verdd.fst._pykernel at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
