"""Exact symbolic verification of q-deformed Lorentz intertwiners,
quantum Minkowski relations, and the braided translation structure."""

from . import algebras, coeff, intertwiners, rewrite, tensor

__all__ = ["algebras", "coeff", "intertwiners", "rewrite", "tensor"]
__version__ = "0.1.0"
