"""Deformation theory of finite-dimensional algebras in exact arithmetic."""

from .linalg import kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
