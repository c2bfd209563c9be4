"""Build hook for the optional compiled elimination kernel.

If Cython or a C compiler is missing the package still installs; deforma then
uses its pure-Python kernel.
"""
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("deforma._rref", ["src/deforma/_rref.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
