"""Build hook for the optional compiled simulation kernel.

The package is fully functional without the extension; envlab.kernels
falls back to a vectorized numpy implementation when the compiled
module is absent.  Set ENVLAB_SKIP_CYTHON=1 to force a pure-Python
install.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ENVLAB_SKIP_CYTHON") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        ext_modules = []
    else:
        ext = Extension(
            "envlab._kernel_c",
            ["src/envlab/_kernel_c.pyx"],
            extra_compile_args=["-O3"],
        )
        ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
