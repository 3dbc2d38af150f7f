"""Build the optional compiled kernels.

Everything else lives in pyproject.toml. When Cython or a C compiler is
missing the package still installs and runs on the numpy kernels.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("AUGDOE_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "augdoe._ckernels",
                    ["src/augdoe/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    # keep a*b+c unfused so results match the numpy kernels bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
