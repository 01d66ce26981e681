"""Exact computer algebra for tame differential calculi over Q(i).

Given a finite-dimensional associative algebra with a differential calculus
and a bilinear metric on its one-forms, this package certifies the tameness
conditions, builds the vector-field Lie algebra, and computes the unique
torsionless metric-compatible connection two independent ways, all in exact
Gaussian-rational arithmetic.
"""

__version__ = "0.1.0"

from .algebra import Algebra
from .bimodule import Bimodule, hom_A, is_centered, module_center, tensor_over_A
from .calculus import Calculus, build_symmetry, q_inverse_apply, validate_calculus
from .connection import (
    Connection,
    Geometry,
    covariant_derivative,
    grassmann,
    koszul_rhs,
    levi_civita_direct,
    levi_civita_koszul,
    lie_bracket,
    nabla_zero,
    torsion,
)
from .linalg import Matrix, Scalar, Subspace, kernel_rows, qi, solve, subspace_ops
from .metric import g_tilde, metric_square, validate_metric, vector_fields

__all__ = [
    "Algebra",
    "Bimodule",
    "Calculus",
    "Connection",
    "Geometry",
    "Matrix",
    "Scalar",
    "Subspace",
    "__version__",
    "build_symmetry",
    "covariant_derivative",
    "g_tilde",
    "grassmann",
    "hom_A",
    "is_centered",
    "kernel_rows",
    "koszul_rhs",
    "levi_civita_direct",
    "levi_civita_koszul",
    "lie_bracket",
    "metric_square",
    "module_center",
    "nabla_zero",
    "q_inverse_apply",
    "qi",
    "solve",
    "subspace_ops",
    "tensor_over_A",
    "torsion",
    "validate_calculus",
    "validate_metric",
    "vector_fields",
]
