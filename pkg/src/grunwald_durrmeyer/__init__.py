"""Grunwald-Durrmeyer operators on Chebyshev nodes: kernels, quadrature and
numerical verification of their approximation properties."""

from .errors import ConfigurationError, DomainError, EvaluationError
from .functions import BATTERY, RealFunction, battery_function, constant, linear_combination
from .kernel import (
    KernelTable,
    NodeSet,
    chebyshev_nodes,
    kernel_eval,
    kernel_matrix,
    kernel_table,
    kernel_tail_bound,
    lagrange_basis_direct,
    lagrange_basis_series,
)
from .operators import (
    DurrmeyerCoefficients,
    Resolution,
    durrmeyer_apply,
    durrmeyer_coefficients,
    durrmeyer_operator,
    grunwald_apply,
    grunwald_operator,
    lagrange_apply,
    operator_error,
)
from .quadrature import QuadratureRule, build_rule, default_rule, integrate, lp_norm, principal_value

__all__ = [
    "BATTERY",
    "ConfigurationError",
    "DomainError",
    "DurrmeyerCoefficients",
    "EvaluationError",
    "KernelTable",
    "NodeSet",
    "QuadratureRule",
    "RealFunction",
    "Resolution",
    "battery_function",
    "build_rule",
    "chebyshev_nodes",
    "constant",
    "default_rule",
    "durrmeyer_apply",
    "durrmeyer_coefficients",
    "durrmeyer_operator",
    "grunwald_apply",
    "grunwald_operator",
    "integrate",
    "kernel_eval",
    "kernel_matrix",
    "kernel_table",
    "kernel_tail_bound",
    "lagrange_apply",
    "lagrange_basis_direct",
    "lagrange_basis_series",
    "linear_combination",
    "lp_norm",
    "operator_error",
    "principal_value",
]
