"""Build script: compiles the optional C kernel for edit-distance scoring.

The package works without the extension; ``autopk.similarity.kernels``
falls back to the pure-Python implementation when the compiled module is
absent.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "autopk.similarity._ckernels",
                ["src/autopk/similarity/_ckernels.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
