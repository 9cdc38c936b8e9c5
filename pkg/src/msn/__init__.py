"""Exact-arithmetic workbench for finite-dimensional multi-seminormed spaces.

Seminorm calculus, embedding certificates, amalgamation pushouts, finite
tower stages with quantitative error certificates, and colouring
experiments, all over exact rationals.
"""

from msn._kernel import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
