import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None and not os.environ.get("EXITWALK_PURE"):
    extensions = cythonize(
        [
            Extension(
                "exitwalk._mckernel",
                ["src/exitwalk/_mckernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
