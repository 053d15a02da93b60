"""Build the optional Cython kernels.

The package works without them: ``phasedual._backend`` falls back to the
pure-Python implementation when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("PHASEDUAL_NO_EXT") != "1":
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
                    "phasedual._kernels",
                    ["src/phasedual/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no fast-math / FMA contraction: results must match the
                    # pure-Python fallback bit for bit
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
