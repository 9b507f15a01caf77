"""Build the optional compiled kernels.

Without Cython or a C compiler the package still installs and runs on the
pure-Python fallback.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("CXORDER_NO_EXT", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "cxorder._ckernels",
                    ["src/cxorder/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math: the error-free transforms need strict IEEE
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
