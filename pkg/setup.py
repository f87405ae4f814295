"""Build script: compiles the optional fast kernel.

The package works without the extension (a pure-Python twin is picked at
import time), so any build failure here downgrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    # -ffp-contract=off: forbid fused multiply-add so the compiled kernel is
    # bit-identical to the pure-Python twin (CPython uses plain SSE2 doubles).
    ext_modules = cythonize(
        [
            "src/reworkopt/_kernel/_core.pyx",
        ],
        language_level=3,
    )
    for ext in ext_modules:
        ext.extra_compile_args = ["-O2", "-ffp-contract=off"]
except Exception as exc:  # pragma: no cover - depends on toolchain
    sys.stderr.write("reworkopt: skipping compiled kernel (%s)\n" % exc)
    ext_modules = []

setup(ext_modules=ext_modules)
