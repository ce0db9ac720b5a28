"""Build hook: compile the zigzag kernel core with Cython when available.

The kernel source is plain Python (``src/zzmorse/_kernel_core.py``); Cython's
pure-Python mode compiles it into an extension module that shadows the ``.py``
file at import time.  Without Cython the package runs the interpreted version
unchanged.  Rebuild in place with::

    python3 setup.py build_ext --inplace
"""

import os

from setuptools import setup

KERNEL = "src/zzmorse/_kernel_core.py"

ext_modules = []
if os.path.exists(KERNEL):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize([KERNEL], compiler_directives={"language_level": "3"})
    except ImportError:
        pass

setup(ext_modules=ext_modules)
