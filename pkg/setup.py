"""Builds the optional compiled lexer. The package works without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("RDFSTAR_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("rdfstar._clexer", ["src/rdfstar/_clexer.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
