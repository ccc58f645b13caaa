import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "homoglab._kernels._fast",
                ["src/homoglab/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

# The compiled module is optional: homoglab._kernels falls back to the
# pure-numpy implementation when the extension is absent.
setup(ext_modules=extensions)
