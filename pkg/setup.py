"""Build the optional Cython kernel.

If Cython or a C compiler is unavailable the package still installs and runs
on the pure-Python kernels.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ORTHOQUIV_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("orthoquiv._ckernels", ["src/orthoquiv/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
