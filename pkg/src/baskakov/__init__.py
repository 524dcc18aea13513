"""Bivariate Kantorovich variants of generalized Baskakov operators.

Evaluation of the operators and their partial derivatives by certified
truncated series, closed-form moments, weighted function-space estimators,
and convergence experiments.
"""

from .basis import BasisParams, DomainError, TruncatedBasis, WindowCapError, basis_weight, truncate_basis
from .catalog import get_function
from .function_spaces import EvaluationGrid
from .kantorovich_1d import Function1D, apply_1d
from .kantorovich_2d import Function2D, apply_2d, partial_x, partial_y

__all__ = [
    "BasisParams",
    "DomainError",
    "EvaluationGrid",
    "Function1D",
    "Function2D",
    "TruncatedBasis",
    "WindowCapError",
    "apply_1d",
    "apply_2d",
    "basis_weight",
    "get_function",
    "partial_x",
    "partial_y",
    "truncate_basis",
]

__version__ = "0.1.0"
