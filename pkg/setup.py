"""Build hook for the optional compiled enumeration kernels.

The package is fully functional without the extension (a pure-Python fallback
is selected at import time); `optional=True` keeps installation working on
machines without a C++ toolchain.
"""

from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "transportgames._kernel_c",
        sources=["src/transportgames/_kernel_c.pyx"],
        language="c++",
        optional=True,
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=_extensions())
