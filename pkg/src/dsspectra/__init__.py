"""Exact tools for spectral questions about doubly stochastic matrices."""
from .exactmat import ExactMatrix
from .scalars import QuadScalar

__all__ = ["ExactMatrix", "QuadScalar"]
__version__ = "0.1.0"
