"""Builds the optional compiled kernel; the package works without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("famverify._gauss", ["src/famverify/_gauss.pyx"], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
