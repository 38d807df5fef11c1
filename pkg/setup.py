"""Build script: compiles the optional fast kernel extension.

The package works without the extension (pure-Python fallback); set
SELMERGRAPH_NO_EXT=1 to skip compilation deliberately.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SELMERGRAPH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("selmergraph._fast", ["src/selmergraph/_fast.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
