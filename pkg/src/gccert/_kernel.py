"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``GCCERT_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("GCCERT_PURE_PYTHON") != "1":
    try:
        from ._ckernel import convolve, inverse_monic  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pykernel import convolve, inverse_monic  # noqa: F401
