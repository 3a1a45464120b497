"""Composite Gauss-Legendre quadrature on [0, pi] and the norms built on it.

Every integral over ``[0, pi]`` in this package goes through a
:class:`QuadratureRule`.  Kernels of degree ``n`` oscillate with frequency
``n``, so the default rule uses ``max(64, 4n)`` panels of 10 points, which
keeps each panel well inside Gauss-Legendre's exponential regime.  Known
non-smooth points of an integrand (jumps, kinks) are made panel boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, EvaluationError

DEFAULT_POINTS_PER_PANEL = 10
DEFAULT_PANELS_PER_N = 4
MIN_PANELS = 64


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a composite Gauss-Legendre rule."""

    nodes: np.ndarray
    weights: np.ndarray
    panels: int
    points_per_panel: int
    edges: np.ndarray = field(repr=False)

    @property
    def descriptor(self) -> str:
        """Short provenance string, e.g. ``gauss-legendre[panels=64,points=10]``."""
        return f"gauss-legendre[panels={self.panels},points={self.points_per_panel}]"

    def __len__(self) -> int:
        return self.nodes.size


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def rule_from_edges(edges: Sequence[float], points_per_panel: int = DEFAULT_POINTS_PER_PANEL) -> QuadratureRule:
    """Gauss-Legendre rule on each interval between consecutive ``edges``."""
    if points_per_panel < 1:
        raise DomainError("points_per_panel must be positive")
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError("panel edges must be strictly increasing with at least two entries")
    x, w = np.polynomial.legendre.leggauss(points_per_panel)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (lo + hi) + half * x).ravel()
    weights = (half * w).ravel()
    return QuadratureRule(
        nodes=_readonly(nodes),
        weights=_readonly(weights),
        panels=edges.size - 1,
        points_per_panel=points_per_panel,
        edges=_readonly(edges.copy()),
    )


def build_rule(
    panels: int,
    points_per_panel: int = DEFAULT_POINTS_PER_PANEL,
    breakpoints: Iterable[float] = (),
    a: float = 0.0,
    b: float = math.pi,
) -> QuadratureRule:
    """Composite Gauss-Legendre rule on ``[a, b]`` with equal panels.

    A breakpoint that falls strictly inside a panel splits that panel in two,
    so the rule never straddles a declared jump or kink.

    Parameters
    ----------
    panels : int
        Number of equal panels, ``>= 1``.
    points_per_panel : int
        Gauss-Legendre points per panel, ``>= 2``.  Each panel integrates
        polynomials of degree ``2 * points_per_panel - 1`` exactly.
    breakpoints : iterable of float, optional
        Abscissae that must coincide with panel boundaries.
    """
    if int(panels) != panels or panels < 1:
        raise DomainError(f"panels must be a positive integer, got {panels!r}")
    if int(points_per_panel) != points_per_panel or points_per_panel < 2:
        raise DomainError(f"points_per_panel must be an integer >= 2, got {points_per_panel!r}")
    edges = np.linspace(a, b, int(panels) + 1)
    extra = [float(p) for p in breakpoints if a < p < b]
    if extra:
        width = (b - a) / panels
        edges = np.union1d(edges, extra)
        # Drop slivers created by breakpoints that sit on (or next to) an edge.
        keep = np.concatenate(([True], np.diff(edges) > 1e-12 * width))
        edges = edges[keep]
        edges[-1] = b
    return rule_from_edges(edges, int(points_per_panel))


def default_rule(
    n: int,
    breakpoints: Iterable[float] = (),
    panels_per_n: int = DEFAULT_PANELS_PER_N,
    points_per_panel: int = DEFAULT_POINTS_PER_PANEL,
) -> QuadratureRule:
    """The standard rule for integrands carrying degree-``n`` kernels."""
    return build_rule(max(MIN_PANELS, panels_per_n * n), points_per_panel, breakpoints)


def _values(f: Callable, x: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        where = float(x[np.argmax(bad)])
        raise EvaluationError(f"non-finite integrand value at t = {where!r}", abscissa=where)
    return values


def integrate(rule: QuadratureRule, f: Callable) -> float:
    """``sum_i w_i f(x_i)`` with exactly rounded summation.

    ``f`` must accept a numpy array of abscissae.  Raises
    :class:`EvaluationError` naming the first abscissa where ``f`` is not
    finite.
    """
    return math.fsum(rule.weights * _values(f, rule.nodes))


def lp_norm(rule: QuadratureRule, f: Callable, p: float) -> float:
    """``(int |f|^p)^(1/p)`` over the rule's interval (plain Lebesgue measure)."""
    if not p >= 1 or not math.isfinite(p):
        raise DomainError(f"L^p norm needs finite p >= 1, got {p!r}")
    values = np.abs(_values(f, rule.nodes))
    if p == 1:
        return math.fsum(rule.weights * values)
    scale = float(values.max())
    if scale == 0.0:
        return 0.0
    # Scaling first keeps |f|^p away from overflow/underflow for large p.
    return scale * math.fsum(rule.weights * (values / scale) ** p) ** (1.0 / p)


def sup_norm_on_grid(f: Callable, grid) -> float:
    """``max |f|`` over the grid; a lower bound for the true sup-norm."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("sup_norm_on_grid needs a nonempty grid")
    return float(np.max(np.abs(_values(f, grid))))


def uniform_grid(points: int = 2001, offset: float = 0.0) -> np.ndarray:
    """``points`` equispaced abscissae on ``[offset, pi - offset]``."""
    if points < 2:
        raise DomainError("a grid needs at least two points")
    return np.linspace(offset, math.pi - offset, int(points))


def _graded_edges(start: float, stop: float, first: float, max_width: float) -> list[float]:
    # Panels growing geometrically (ratio 2) away from ``start`` toward ``stop``.
    direction = 1.0 if stop > start else -1.0
    length = abs(stop - start)
    edges, pos, width = [0.0], 0.0, first
    while pos + width < length:
        pos += width
        edges.append(pos)
        width = min(2.0 * width, max_width)
    edges.append(length)
    return [start + direction * e for e in edges]


def excluded_integral(
    func: Callable,
    singularity: float,
    eps: float,
    a: float = 0.0,
    b: float = math.pi,
    points_per_panel: int = DEFAULT_POINTS_PER_PANEL,
    max_width: float = math.pi / 64,
) -> float:
    """Integral over ``[a, b]`` minus the window ``(s - eps, s + eps)``.

    Panels are graded geometrically away from the excluded window so a
    ``1/(u - s)`` singularity just outside it is integrated accurately.
    """
    total = 0.0
    if singularity - eps > a:
        edges = _graded_edges(singularity - eps, a, eps, max_width)[::-1]
        total += integrate(rule_from_edges(edges, points_per_panel), func)
    if singularity + eps < b:
        edges = _graded_edges(singularity + eps, b, eps, max_width)
        total += integrate(rule_from_edges(edges, points_per_panel), func)
    return total


def principal_value(
    func: Callable,
    singularity: float,
    a: float = 0.0,
    b: float = math.pi,
    eps_values: Sequence[float] = (1e-2, 1e-3, 1e-4),
    points_per_panel: int = DEFAULT_POINTS_PER_PANEL,
) -> float:
    """Cauchy principal value of a simple-pole integrand by symmetric exclusion.

    With a symmetric window of half-width ``eps`` the excluded part is odd in
    ``eps``: ``I(eps) = PV - c1 eps - c3 eps^3 - ...``.  The values at the
    given (geometrically spaced) ``eps`` are Richardson-extrapolated against
    the powers 1, 3, 5, ... in turn.
    """
    eps_values = [float(e) for e in eps_values]
    if len(eps_values) < 2 or any(e <= 0 for e in eps_values):
        raise DomainError("principal_value needs at least two positive window widths")
    ratios = {round(eps_values[i] / eps_values[i + 1], 9) for i in range(len(eps_values) - 1)}
    if len(ratios) != 1:
        raise DomainError("window widths must form a geometric sequence")
    r = eps_values[0] / eps_values[1]
    table = [excluded_integral(func, singularity, e, a, b, points_per_panel) for e in eps_values]
    power = 1
    while len(table) > 1:
        factor = r**power
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        power += 2
    return table[0]
