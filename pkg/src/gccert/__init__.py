"""Exact critical-point certificates for Gelfand-Cetlin fibers of complete flag manifolds."""

__version__ = "0.1.0"

from ._kernel import BACKEND  # noqa: E402,F401
