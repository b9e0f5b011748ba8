"""Operator-coefficient non-commutative polynomial calculus on matrix models.

The package evaluates B-valued polynomials, their free difference quotients
and the associated norms in finite tracial matrix models, and checks the
operator-coefficient free Poincare inequality together with its proof identity.
"""

__version__ = "0.1.0"

from .coeff_algebra import (  # noqa: E402
    CoeffAlgebra,
    MatrixModel,
    build_subalgebra,
    conditional_expectation,
    l2_norm,
    norms,
    op_norm,
)
from .derivation import fdq  # noqa: E402
from .ncpoly import Monomial, NCPoly, norm_R_upper  # noqa: E402
from .tensor2 import TensorElem, bimodule_act, mu, mu_idE_eval, pi_upper, sharp, spatial_norm  # noqa: E402

__all__ = [
    "CoeffAlgebra",
    "MatrixModel",
    "Monomial",
    "NCPoly",
    "TensorElem",
    "bimodule_act",
    "build_subalgebra",
    "conditional_expectation",
    "fdq",
    "l2_norm",
    "mu",
    "mu_idE_eval",
    "norm_R_upper",
    "norms",
    "op_norm",
    "pi_upper",
    "sharp",
    "spatial_norm",
]
