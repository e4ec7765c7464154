"""Builds the optional compiled kernels; the package falls back to numpy without them."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "skewmax._kernels",
                ["src/skewmax/_kernels.pyx"],
                # no -ffast-math: the kernels must stay IEEE-exact for reproducibility
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
