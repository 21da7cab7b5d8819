"""Build script for the compiled simplex kernel.

The extension is optional: if Cython or a C compiler is unavailable the
install still succeeds and the package falls back to the pure numpy
kernel at import time.  ``-ffp-contract=off`` keeps the compiled lane
arithmetically identical to the fallback (no fused multiply-add).
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "expcompare._simplex_cy",
                ["src/expcompare/_simplex_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
