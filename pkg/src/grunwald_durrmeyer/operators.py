"""Lagrange, Grunwald and Grunwald-Durrmeyer operators on [0, pi].

All three act in the angular variable: samples are taken at ``f(theta_k)``.

    L_n(f)(t) = sum_k f(theta_k) P_k(t)
    G_n(f)(t) = sum_k f(theta_k) S_k(t)
    D_n(f)(t) = sum_k c_k S_k(t),   c_k = (n/pi) int_0^pi f(s) S_k(s) ds
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigurationError, DomainError, EvaluationError
from .functions import RealFunction
from .kernel import _check_degree, chebyshev_nodes, kernel_matrix, lagrange_basis_series
from .quadrature import (
    DEFAULT_PANELS_PER_N,
    DEFAULT_POINTS_PER_PANEL,
    QuadratureRule,
    default_rule,
    lp_norm,
    sup_norm_on_grid,
    uniform_grid,
)

OperatorKind = Literal["grunwald", "durrmeyer"]


@dataclass(frozen=True)
class DurrmeyerCoefficients:
    """``c[k-1] = (n/pi) int f S_k`` together with the rule that produced them."""

    n: int
    c: np.ndarray
    rule_descriptor: str


@dataclass(frozen=True)
class Resolution:
    """Numerical resolution for error studies."""

    panels_per_n: int = DEFAULT_PANELS_PER_N
    points_per_panel: int = DEFAULT_POINTS_PER_PANEL
    grid_points: int = 2001
    force: bool = False

    def rule(self, n: int, breakpoints=()) -> QuadratureRule:
        return default_rule(n, breakpoints, self.panels_per_n, self.points_per_panel)


def _node_samples(n: int, f: RealFunction) -> np.ndarray:
    angles = chebyshev_nodes(n).angles
    values = np.asarray(f(angles), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        where = float(angles[np.argmax(bad)])
        raise EvaluationError(f"{f.label} is not finite at node {where!r}", abscissa=where)
    return values


def _shape_like(value: np.ndarray, t):
    return float(value[0]) if np.ndim(t) == 0 else value.reshape(np.shape(t))


def lagrange_apply(n: int, f: RealFunction, t):
    """``L_n(f)(t) = sum_k f(theta_k) P_k(t)``.

    ``L_n(f)`` is the polynomial in ``x = cos t`` of degree ``< n`` that
    matches ``f(theta_k)`` at ``x_k = cos theta_k``.
    """
    n = _check_degree(n)
    samples = _node_samples(n, f)
    t_flat = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    basis = lagrange_basis_series(n, np.arange(1, n + 1)[:, None], t_flat[None, :])
    return _shape_like(samples @ basis, t)


def grunwald_apply(n: int, f: RealFunction, theta):
    """``G_n(f)(theta) = sum_k f(theta_k) S_k(theta)``."""
    n = _check_degree(n)
    samples = _node_samples(n, f)
    t_flat = np.atleast_1d(np.asarray(theta, dtype=float)).ravel()
    return _shape_like(samples @ kernel_matrix(n, t_flat), theta)


def durrmeyer_coefficients(
    n: int, f: RealFunction, rule: QuadratureRule | None = None, force: bool = False
) -> DurrmeyerCoefficients:
    """Kernel averages ``c_k = (n/pi) int_0^pi f(t) S_k(t) dt``.

    Parameters
    ----------
    n : int
        Operator degree.
    f : RealFunction
        Function to average; its declared breakpoints become panel edges of
        the default rule.
    rule : QuadratureRule, optional
        Defaults to ``default_rule(n, f.breakpoints)``.
    force : bool
        Accept a rule with fewer than ``4n`` panels.

    Raises
    ------
    ConfigurationError
        If the rule is too coarse to resolve frequency-``n`` oscillation and
        ``force`` is not set.
    """
    n = _check_degree(n)
    if rule is None:
        rule = default_rule(n, f.breakpoints)
    if rule.panels < DEFAULT_PANELS_PER_N * n and not force:
        raise ConfigurationError(
            f"rule with {rule.panels} panels under-resolves degree {n} kernels "
            f"(need >= {DEFAULT_PANELS_PER_N * n}); pass force=True to override"
        )
    values = np.asarray(f(rule.nodes), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        where = float(rule.nodes[np.argmax(bad)])
        raise EvaluationError(f"{f.label} is not finite at t = {where!r}", abscissa=where)
    table = kernel_matrix(n, rule.nodes)
    c = (n / math.pi) * (table @ (rule.weights * values))
    c.setflags(write=False)
    return DurrmeyerCoefficients(n=n, c=c, rule_descriptor=rule.descriptor)


def durrmeyer_apply(coeffs: DurrmeyerCoefficients, theta):
    """``D_n(f)(theta) = sum_k c_k S_k(theta)``."""
    t_flat = np.atleast_1d(np.asarray(theta, dtype=float)).ravel()
    return _shape_like(coeffs.c @ kernel_matrix(coeffs.n, t_flat), theta)


def durrmeyer_operator(n: int, f: RealFunction, rule: QuadratureRule | None = None, force: bool = False) -> RealFunction:
    """``D_n(f)`` packaged as a :class:`RealFunction` (a trigonometric polynomial)."""
    coeffs = durrmeyer_coefficients(n, f, rule, force)

    def evaluator(t):
        return durrmeyer_apply(coeffs, t)

    return RealFunction(evaluator, "c1", f"D_{n}({f.label})")


def grunwald_operator(n: int, f: RealFunction) -> RealFunction:
    samples = _node_samples(n, f)

    def evaluator(t):
        return (samples @ kernel_matrix(n, np.ravel(t))).reshape(np.shape(t))

    return RealFunction(evaluator, "c1", f"G_{n}({f.label})")


def apply_operator(kind: OperatorKind, n: int, f: RealFunction, resolution: Resolution | None = None) -> RealFunction:
    resolution = resolution or Resolution()
    if kind == "durrmeyer":
        return durrmeyer_operator(n, f, resolution.rule(n, f.breakpoints), resolution.force)
    if kind == "grunwald":
        return grunwald_operator(n, f)
    raise DomainError(f"unknown operator {kind!r}; use 'grunwald' or 'durrmeyer'")


def parse_norm(norm) -> float:
    """Return ``p`` for a norm name: ``'sup'`` -> inf, ``'L2'``/``2`` -> 2.0."""
    if isinstance(norm, str):
        text = norm.strip().lower()
        if text in ("sup", "inf", "linf", "sup_grid"):
            return math.inf
        if text.startswith("lp(") and text.endswith(")"):
            text = text[3:-1]
        elif text.startswith("l"):
            text = text[1:]
        try:
            p = float(text)
        except ValueError:
            raise DomainError(f"cannot parse norm {norm!r}; use 'sup' or 'L<p>'") from None
    else:
        p = float(norm)
    if math.isinf(p):
        return p
    if not p >= 1:
        raise DomainError(f"L^p norm needs p >= 1, got {p!r}")
    return p


def norm_label(p: float) -> str:
    return "sup" if math.isinf(p) else f"L{p:g}"


def operator_error(
    n: int, f: RealFunction, op_kind: OperatorKind = "durrmeyer", norm="sup", resolution: Resolution | None = None
) -> float:
    """``||Op_n(f) - f||`` in the grid sup-norm or an L^p norm on [0, pi]."""
    resolution = resolution or Resolution()
    p = parse_norm(norm)
    approx = apply_operator(op_kind, n, f, resolution)

    def residual(t):
        return approx(t) - f(t)

    if math.isinf(p):
        return sup_norm_on_grid(residual, uniform_grid(resolution.grid_points))
    return lp_norm(resolution.rule(n, f.breakpoints), residual, p)


def operator_norm_ratio(
    n: int, f: RealFunction, op_kind: OperatorKind = "durrmeyer", norm="sup", resolution: Resolution | None = None
) -> float:
    """``||Op_n(f)|| / ||f||`` in the requested norm (an operator-norm lower bound)."""
    resolution = resolution or Resolution()
    p = parse_norm(norm)
    approx = apply_operator(op_kind, n, f, resolution)
    if math.isinf(p):
        grid = uniform_grid(resolution.grid_points)
        return sup_norm_on_grid(approx, grid) / sup_norm_on_grid(f, grid)
    rule = resolution.rule(n, f.breakpoints)
    return lp_norm(rule, approx, p) / lp_norm(rule, f, p)
