"""Numerical checks of the kernel identities, bounds and convergence rates.

Nothing here proves anything.  Each function turns one quantitative claim
about the kernels ``S_k`` or the operator ``D_n`` into a number that can be
compared across ``n``:

* exact identities (kernel mass ``pi/n``, partition of unity) become
  deviations;
* "bounded by an absolute constant" claims become ratios whose growth across
  octaves of ``n`` is measured;
* rate statements become log-log fits against a :class:`RateModel`.

Grid-based moduli of continuity are lower bounds of the true modulus.  The
K-functional value is an upper bound obtained from explicit smooth
candidates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError
from .functions import RealFunction, constant
from .kernel import (
    _check_degree,
    _check_index,
    chebyshev_nodes,
    kernel_eval,
    kernel_matrix,
    lagrange_basis_direct,
    lagrange_basis_series,
    node_angles,
)
from .operators import durrmeyer_operator
from .quadrature import (
    QuadratureRule,
    build_rule,
    default_rule,
    integrate,
    lp_norm,
    principal_value,
    rule_from_edges,
    sup_norm_on_grid,
    uniform_grid,
)

MODULUS_GRID_POINTS = 4001
# Endpoint offset for quantities whose derivation excludes theta = 0, pi.
ENDPOINT_OFFSET = 1e-6


class DegenerateModulusWarning(UserWarning):
    """``omega(f, delta)`` was requested with ``delta`` below the grid spacing."""


# --------------------------------------------------------------------------
# records and models


@dataclass(frozen=True)
class RateModel:
    """A predicted error scale as a function of ``n``.

    ``kind`` is ``"log_over_n"`` for ``(1 + log n)/n``, ``"inv_n_pow"`` for
    ``n**-alpha`` or ``"m_n"`` for the K-functional scale, which is
    ``(1 + log n)/n`` when ``p == 1`` and ``(1 + log n)/n + n**(-1/p)``
    otherwise.
    """

    kind: str = "log_over_n"
    alpha: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind not in ("log_over_n", "inv_n_pow", "m_n"):
            raise DomainError(f"unknown rate model {self.kind!r}")
        if self.kind == "inv_n_pow" and (self.alpha is None or self.alpha <= 0):
            raise DomainError("inv_n_pow needs a positive exponent alpha")
        if self.kind == "m_n" and (self.p is None or not self.p >= 1):
            raise DomainError("m_n needs p >= 1")

    def value(self, n) -> float:
        n = float(n)
        if self.kind == "log_over_n":
            return (1.0 + math.log(n)) / n
        if self.kind == "inv_n_pow":
            return n ** (-self.alpha)
        return m_n(n, self.p)

    @property
    def label(self) -> str:
        if self.kind == "inv_n_pow":
            return f"inv_n_pow({self.alpha:g})"
        if self.kind == "m_n":
            return f"m_n({self.p:g})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "RateModel":
        """Parse ``log_over_n``, ``inv_n_pow:0.5`` or ``m_n:2``."""
        name, _, arg = text.strip().partition(":")
        if name == "inv_n_pow":
            return cls("inv_n_pow", alpha=float(arg))
        if name == "m_n":
            return cls("m_n", p=float(arg or 1))
        if name == "log_over_n" and not arg:
            return cls()
        raise DomainError(f"cannot parse rate model {text!r}")


def m_n(n, p: float) -> float:
    """``(1 + log n)/n``, plus ``n**(-1/p)`` when ``p > 1``."""
    if not p >= 1:
        raise DomainError("m_n needs p >= 1")
    base = (1.0 + math.log(n)) / n
    return base if p == 1 else base + n ** (-1.0 / p)


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    function_label: str
    operator: str
    norm: str
    error: float
    model_value: float


@dataclass(frozen=True)
class FitReport:
    """Least-squares line ``log(error) = slope * log(model) + intercept``."""

    slope: float
    intercept: float
    r_squared: float
    max_ratio: float
    min_ratio: float
    points: int

    @property
    def ratio_spread(self) -> float:
        return self.max_ratio / self.min_ratio if self.min_ratio > 0 else math.inf


def rate_fit(records: Sequence[ConvergenceRecord]) -> FitReport:
    """Fit ``log(error)`` against ``log(model_value)`` over the usable records.

    Records with a non-finite or non-positive error are skipped.  At least
    four distinct ``n`` must remain.
    """
    usable = [r for r in records if math.isfinite(r.error) and r.error > 0 and r.model_value > 0]
    if len({r.n for r in usable}) < 4:
        raise DomainError("rate_fit needs at least 4 records with distinct n and positive error")
    x = np.log([r.model_value for r in usable])
    y = np.log([r.error for r in usable])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = np.sum((y - y.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual**2) / total) if total > 0 else 1.0
    ratios = np.array([r.error / r.model_value for r in usable])
    return FitReport(float(slope), float(intercept), r_squared, float(ratios.max()), float(ratios.min()), len(usable))


def octave_growth(values: Sequence[float]) -> float:
    """Largest ratio ``values[i+1] / values[i]`` (values indexed by octaves of n)."""
    values = np.asarray(values, dtype=float)
    return float(np.max(values[1:] / values[:-1]))


# --------------------------------------------------------------------------
# exact identities


@dataclass(frozen=True)
class KernelMassReport:
    n: int
    deviations: np.ndarray
    rule_descriptor: str

    @property
    def max_deviation(self) -> float:
        return float(self.deviations.max())

    @property
    def worst_k(self) -> int:
        return int(np.argmax(self.deviations)) + 1


def verify_kernel_mass(n: int, rule: QuadratureRule | None = None) -> KernelMassReport:
    """``|int_0^pi S_k - pi/n|`` for every ``k``."""
    n = _check_degree(n)
    rule = rule or default_rule(n)
    masses = kernel_matrix(n, rule.nodes) @ rule.weights
    return KernelMassReport(n, np.abs(masses - math.pi / n), rule.descriptor)


def partition_of_unity_deviation(n: int, grid=None, path: str = "series") -> float:
    """``max_t |sum_k S_k(t) - 1|`` over a grid."""
    n = _check_degree(n)
    grid = uniform_grid() if grid is None else np.asarray(grid, dtype=float)
    if path == "series":
        sums = kernel_matrix(n, grid).sum(axis=0)
    else:
        sums = np.asarray(kernel_eval(n, np.arange(1, n + 1)[:, None], grid[None, :], path=path)).sum(axis=0)
    return float(np.max(np.abs(sums - 1.0)))


def cardinality_deviation(n: int, path: str = "direct") -> float:
    """``max_{j,k} |P_k(theta_j) - delta_kj|``."""
    n = _check_degree(n)
    basis = lagrange_basis_direct if path == "direct" else lagrange_basis_series
    angles = chebyshev_nodes(n).angles
    values = basis(n, np.arange(1, n + 1)[:, None], angles[None, :])
    return float(np.max(np.abs(values - np.eye(n))))


def distance_to_singularity(n: int, k, t) -> np.ndarray:
    """Distance from ``t`` to the nearest zero of ``cos t - cos theta_k``."""
    theta = node_angles(n, k)
    t = np.asarray(t, dtype=float)
    two_pi = 2.0 * math.pi
    d_plus = np.abs((t - theta + math.pi) % two_pi - math.pi)
    d_minus = np.abs((t + theta + math.pi) % two_pi - math.pi)
    return np.minimum(d_plus, d_minus)


def dual_path_samples(n_max: int, samples: int, rng: np.random.Generator, min_distance: float = 1e-3):
    """Random ``(n, k, t)`` with ``t`` in the shifted range and away from nodes."""
    n = rng.integers(1, n_max + 1, size=samples)
    k = np.floor(rng.random(samples) * n).astype(int) + 1
    shift = math.pi / (2.0 * n)
    t = -shift + rng.random(samples) * (math.pi + 2.0 * shift)
    keep = distance_to_singularity(n, k, t) >= min_distance
    return n[keep], k[keep], t[keep]


def dual_path_deviation(n_values, k_values, t_values) -> float:
    """``max |direct - series|`` over the given sample triples."""
    n_values, k_values, t_values = map(np.asarray, (n_values, k_values, t_values))
    worst = 0.0
    for n in np.unique(n_values):
        sel = n_values == n
        direct = lagrange_basis_direct(int(n), k_values[sel], t_values[sel])
        series = lagrange_basis_series(int(n), k_values[sel], t_values[sel])
        worst = max(worst, float(np.max(np.abs(np.asarray(direct) - np.asarray(series)))))
    return worst


def constant_reproduction_deviation(n: int, grid=None, rule: QuadratureRule | None = None, force: bool = False) -> float:
    """``||D_n(1) - 1||`` on a grid."""
    grid = uniform_grid() if grid is None else grid
    approx = durrmeyer_operator(n, constant(1.0, "one"), rule, force)
    return sup_norm_on_grid(lambda t: approx(t) - 1.0, grid)


def cosine_kernel_identity(n: int, theta: float) -> tuple[float, float]:
    """Principal value of ``int_0^pi cos(nu)/(cos u - cos theta) du`` and ``pi sin(n theta)/sin theta``.

    ``theta`` is pulled in from the endpoints by ``ENDPOINT_OFFSET``; the
    identity is stated only for interior ``theta``.
    """
    theta = min(max(float(theta), ENDPOINT_OFFSET), math.pi - ENDPOINT_OFFSET)
    c = math.cos(theta)
    eps = min(1e-2, 0.5 * theta, 0.5 * (math.pi - theta))
    value = principal_value(lambda u: np.cos(n * u) / (np.cos(u) - c), theta, eps_values=(eps, eps / 10, eps / 100))
    return value, math.pi * math.sin(n * theta) / math.sin(theta)


# --------------------------------------------------------------------------
# kernel masses and moments


def lebesgue_sum(n: int, theta):
    """``sum_k |S_k(theta)|``."""
    n = _check_degree(n)
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    value = np.abs(kernel_matrix(n, t)).sum(axis=0)
    return float(value[0]) if np.ndim(theta) == 0 else value.reshape(np.shape(theta))


def kernel_sign_changes(n: int, k: int, bracket_points: int | None = None, iterations: int = 60) -> np.ndarray:
    """Sign changes of ``S_k`` in ``(0, pi)``, bracketed on a ``16n`` grid and bisected."""
    n = _check_degree(n)
    _check_index(n, k)
    m = bracket_points or 16 * n
    t = np.linspace(0.0, math.pi, m + 1)
    v = kernel_matrix(n, t, [k])[0]
    exact = t[1:-1][v[1:-1] == 0.0]
    idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    lo, hi, v_lo = t[idx], t[idx + 1], v[idx]
    for _ in range(iterations):
        if lo.size == 0:
            break
        mid = 0.5 * (lo + hi)
        v_mid = kernel_matrix(n, mid, [k])[0]
        left = np.sign(v_mid) == np.sign(v_lo)
        lo = np.where(left, mid, lo)
        v_lo = np.where(left, v_mid, v_lo)
        hi = np.where(left, hi, mid)
    return np.sort(np.concatenate([0.5 * (lo + hi), exact]))


def _split_rule(rule: QuadratureRule, extra: Iterable[float]) -> QuadratureRule:
    a, b = rule.edges[0], rule.edges[-1]
    width = (b - a) / rule.panels
    pts = np.array([p for p in extra if a < p < b], dtype=float)
    if pts.size == 0:
        return rule
    edges = np.union1d(rule.edges, pts)
    keep = np.concatenate(([True], np.diff(edges) > 1e-12 * width))
    edges = edges[keep]
    edges[-1] = b
    return rule_from_edges(edges, rule.points_per_panel)


def kernel_rule(n: int, k: int, rule: QuadratureRule | None = None, extra: Iterable[float] = ()) -> QuadratureRule:
    """``rule`` refined so that sign changes of ``S_k``, ``theta_k`` and ``extra`` are panel edges."""
    rule = rule or default_rule(n)
    points = list(kernel_sign_changes(n, k)) + [float(node_angles(n, k))] + list(extra)
    return _split_rule(rule, points)


def kernel_abs_mass(n: int, k: int, rule: QuadratureRule | None = None) -> float:
    """``int_0^pi |S_k(t)| dt``."""
    n = _check_degree(n)
    split = kernel_rule(n, k, rule)
    return integrate(split, lambda t: np.abs(kernel_matrix(n, t, [k])[0]))


def kernel_moment(n: int, k: int, rule: QuadratureRule | None = None) -> float:
    """``int_0^pi |t - theta_k| |S_k(t)| dt``."""
    n = _check_degree(n)
    theta = float(node_angles(n, k))
    split = kernel_rule(n, k, rule)
    return integrate(split, lambda t: np.abs(t - theta) * np.abs(kernel_matrix(n, t, [k])[0]))


@lru_cache(maxsize=64)
def _moment_table(n: int, edges: tuple, points_per_panel: int) -> tuple[np.ndarray, np.ndarray]:
    base = rule_from_edges(np.array(edges), points_per_panel)
    masses, moments = np.empty(n), np.empty(n)
    for k in range(1, n + 1):
        split = kernel_rule(n, k, base)
        s = np.abs(kernel_matrix(n, split.nodes, [k])[0])
        theta = float(node_angles(n, k))
        masses[k - 1] = math.fsum(split.weights * s)
        moments[k - 1] = math.fsum(split.weights * s * np.abs(split.nodes - theta))
    masses.setflags(write=False)
    moments.setflags(write=False)
    return masses, moments


def kernel_moments(n: int, rule: QuadratureRule | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Absolute masses and first absolute moments of all ``S_k`` (cached per rule)."""
    n = _check_degree(n)
    rule = rule or default_rule(n)
    return _moment_table(n, tuple(rule.edges.tolist()), rule.points_per_panel)


def delta_n(n: int, theta, rule: QuadratureRule | None = None):
    """``(n/pi) sum_k |S_k(theta)| int |t - theta_k| |S_k(t)| dt``."""
    n = _check_degree(n)
    _, moments = kernel_moments(n, rule)
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    value = (n / math.pi) * (moments @ np.abs(kernel_matrix(n, t)))
    return float(value[0]) if np.ndim(theta) == 0 else value.reshape(np.shape(theta))


def error_split(n: int, f: RealFunction, theta, rule: QuadratureRule | None = None) -> tuple[np.ndarray, np.ndarray]:
    """The two terms bounding ``|D_n(f)(theta) - f(theta)|``.

    ``E1 = (n/pi) sum_k |S_k(theta)| int |f(t) - f(theta_k)| |S_k(t)| dt`` and
    ``E2 = sum_k |f(theta_k) - f(theta)| |S_k(theta)|``.
    """
    n = _check_degree(n)
    rule = rule or default_rule(n, f.breakpoints)
    angles = chebyshev_nodes(n).angles
    f_nodes = f(angles)
    inner = np.empty(n)
    for k in range(1, n + 1):
        split = kernel_rule(n, k, rule, f.breakpoints)
        s = np.abs(kernel_matrix(n, split.nodes, [k])[0])
        inner[k - 1] = math.fsum(split.weights * s * np.abs(f(split.nodes) - f_nodes[k - 1]))
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    abs_s = np.abs(kernel_matrix(n, t))
    e1 = (n / math.pi) * (inner @ abs_s)
    e2 = np.sum(np.abs(f_nodes[:, None] - f(t)[None, :]) * abs_s, axis=0)
    return e1, e2


# --------------------------------------------------------------------------
# moduli of continuity


class ModulusCurve:
    """Grid modulus of continuity for all separations up to ``max_lag`` steps.

    ``curve[L] = max_{l <= L} max_i |f(x_{i+l}) - f(x_i)|``.  Evaluating at
    ``delta`` uses ``L = floor(delta / spacing)``, so values are lower bounds
    of the true modulus.
    """

    def __init__(self, f: Callable, a: float, b: float, points: int = MODULUS_GRID_POINTS, max_lag: int | None = None):
        if points < 2 or not b > a:
            raise DomainError("modulus grid needs b > a and at least two points")
        self.a, self.b = float(a), float(b)
        self.x = np.linspace(a, b, int(points))
        self.spacing = (self.b - self.a) / (points - 1)
        values = np.asarray(f(self.x), dtype=float)
        max_lag = points - 1 if max_lag is None else min(int(max_lag), points - 1)
        curve = np.zeros(max_lag + 1)
        for lag in range(1, max_lag + 1):
            curve[lag] = max(curve[lag - 1], float(np.max(np.abs(values[lag:] - values[:-lag]))))
        self.curve = curve

    def lag(self, delta):
        # The 1e-9 slack keeps delta = L * spacing from rounding down to L - 1.
        return np.minimum(np.floor(np.asarray(delta, dtype=float) / self.spacing + 1e-9).astype(int), self.curve.size - 1)

    def __call__(self, delta):
        return self.curve[self.lag(delta)]


def modulus_of_continuity(
    f: Callable, delta: float, grid_resolution: int = MODULUS_GRID_POINTS, domain: tuple[float, float] = (0.0, math.pi)
) -> float:
    """Grid estimate of ``omega(f, delta) = sup_{|s-t| <= delta} |f(s) - f(t)|``.

    Pairs of grid points within ``delta`` are searched with a sliding window,
    and every grid point ``x`` is also paired with ``x + delta`` itself.  The
    result is a lower bound of the true modulus.  A ``delta`` below the grid
    spacing returns 0 and emits :class:`DegenerateModulusWarning`.

    Raises
    ------
    DomainError
        For ``delta <= 0`` or a step-tagged function, whose modulus does not
        tend to zero.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    if isinstance(f, RealFunction) and f.smoothness == "step":
        raise DomainError(f"{f.label} is a step function; its modulus of continuity is degenerate")
    a, b = domain
    spacing = (b - a) / (grid_resolution - 1)
    if delta < spacing:
        warnings.warn(
            f"delta={delta:g} is below the grid spacing {spacing:g}; returning 0",
            DegenerateModulusWarning,
            stacklevel=2,
        )
        return 0.0
    window = int(math.floor(delta / spacing + 1e-9))
    curve = ModulusCurve(f, a, b, grid_resolution, max_lag=window)
    value = float(curve.curve[-1])
    if delta < b - a:
        x = curve.x[curve.x + delta <= b]
        value = max(value, float(np.max(np.abs(np.asarray(f(x + delta)) - np.asarray(f(x))))))
    return value


def compose_arccos(f: Callable) -> Callable:
    """``x -> f(arccos x)`` on ``[-1, 1]``."""
    return lambda x: f(np.arccos(np.clip(x, -1.0, 1.0)))


@dataclass(frozen=True)
class PointwiseModel:
    """Pointwise rate model ``omega(f, delta_n) + omega(F, sqrt(1-x^2)/n) + omega(F, 1/n^2)``."""

    theta: np.ndarray
    values: np.ndarray
    delta: np.ndarray
    floor_binds: np.ndarray


def pointwise_rate_model(
    f: RealFunction, n: int, theta, rule: QuadratureRule | None = None, grid_resolution: int = MODULUS_GRID_POINTS
) -> PointwiseModel:
    """Model value at each ``theta`` with ``F = f o arccos`` and ``x = cos theta``.

    ``delta_n(theta)`` is floored at one grid step of the modulus grid;
    ``floor_binds`` marks where that floor was used.  The modulus of ``F``
    uses a grid fine enough to resolve separations of ``1/n^2``.
    """
    if not f.is_continuous:
        raise DomainError("the pointwise model needs a continuous function")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    d = np.atleast_1d(delta_n(n, theta, rule))
    curve_f = ModulusCurve(f, 0.0, math.pi, grid_resolution)
    floor_binds = d < curve_f.spacing
    term1 = curve_f(np.maximum(d, curve_f.spacing))

    x = np.cos(theta)
    small = 1.0 / n**2
    points = max(grid_resolution, int(math.ceil(2.0 / small)) + 1)
    spacing = 2.0 / (points - 1)
    max_lag = int(math.ceil((1.0 / n) / spacing)) + 1
    curve_F = ModulusCurve(compose_arccos(f), -1.0, 1.0, points, max_lag=max_lag)
    term2 = curve_F(np.sqrt(np.clip(1.0 - x * x, 0.0, None)) / n)
    term3 = curve_F(small)
    return PointwiseModel(theta, term1 + term2 + term3, d, floor_binds)


# --------------------------------------------------------------------------
# Steklov means and the K-functional


@dataclass(frozen=True)
class SmoothCandidate:
    """A C1 (or Lipschitz) surrogate ``g`` with an upper bound on ``sup |g'|``."""

    g: RealFunction
    derivative_sup_bound: float
    h: float


def _reflect(s: np.ndarray) -> np.ndarray:
    s = np.where(s < 0.0, -s, s)
    return np.where(s > math.pi, 2.0 * math.pi - s, s)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def steklov_smooth(f: RealFunction, h: float) -> SmoothCandidate:
    """One-sided Steklov mean ``g(x) = (1/h) int_0^h f_ext(x + u) du``.

    ``f_ext`` is ``f`` reflected evenly across both endpoints.  Since
    ``g'(x) = (f_ext(x + h) - f_ext(x)) / h``, the derivative bound is
    ``omega(f, h)/h`` for continuous ``f`` and the sampled sup of that
    difference quotient otherwise.
    """
    if not 0.0 < h < 0.5 * math.pi:
        raise DomainError(f"smoothing radius must lie in (0, pi/2), got {h!r}")
    if f.smoothness == "generic_lp" and not f.breakpoints:
        warnings.warn("Steklov mean of a generic L^p function uses plain Gauss-Legendre windows", stacklevel=2)

    def f_ext(s):
        return f(_reflect(s))

    # Non-smooth points of f_ext on [0, 3pi/2]: pi (reflection) and f's breakpoints with their mirror images.
    cuts = sorted({math.pi} | set(f.breakpoints) | {2.0 * math.pi - b for b in f.breakpoints})
    cuts = np.array(cuts, dtype=float)

    def g(x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        ends = np.concatenate(
            [flat[:, None], np.clip(cuts[None, :], flat[:, None], flat[:, None] + h), flat[:, None] + h], axis=1
        )
        lo, hi = ends[:, :-1], ends[:, 1:]
        half = 0.5 * (hi - lo)
        nodes = 0.5 * (lo + hi)[..., None] + half[..., None] * _GL_X
        total = np.sum(half[..., None] * _GL_W * f_ext(nodes), axis=(1, 2))
        return (total / h).reshape(x.shape)

    grid = np.linspace(0.0, math.pi, MODULUS_GRID_POINTS)
    if f.is_continuous and h >= grid[1] - grid[0]:
        bound = modulus_of_continuity(f, h) / h
    else:
        bound = float(np.max(np.abs(f_ext(grid + h) - f_ext(grid)))) / h
    kinks = sorted({p for b in list(f.breakpoints) + [math.pi] for p in (b, b - h) if 0.0 < p < math.pi})
    tag = "c1" if f.is_continuous else "lipschitz"
    g_fn = RealFunction(g, tag, f"steklov({f.label}, h={h:g})", lipschitz=bound, kinks=tuple(kinks))
    return SmoothCandidate(g_fn, bound, float(h))


def default_h_candidates(delta: float) -> tuple[float, ...]:
    return tuple(c * delta for c in (0.5, 1.0, 2.0, 4.0, 8.0))


def k_functional_terms(
    f: RealFunction, delta: float, p: float, h_candidates: Sequence[float] | None = None, panels: int = 256
) -> list[tuple[float, float]]:
    """``(h, ||f - g_h||_p + delta * bound_h)`` for each admissible candidate.

    ``h = 0`` stands for ``g = f`` itself, offered when ``f`` is C1 with a
    known derivative; its value is ``delta * max |f'|`` on the grid.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    hs = default_h_candidates(delta) if h_candidates is None else tuple(h_candidates)
    if not hs:
        raise DomainError("h_candidates must be nonempty")
    terms = []
    if f.smoothness == "c1" and f.derivative is not None:
        grid = np.linspace(0.0, math.pi, MODULUS_GRID_POINTS)
        terms.append((0.0, delta * float(np.max(np.abs(f.derivative(grid))))))
    for h in hs:
        if not 0.0 < h < 0.5 * math.pi:
            continue
        cand = steklov_smooth(f, h)
        rule = build_rule(panels, 10, breakpoints=set(f.breakpoints) | set(cand.g.kinks))
        distance = lp_norm(rule, lambda t: f(t) - cand.g(t), p)
        terms.append((float(h), distance + delta * cand.derivative_sup_bound))
    if not terms:
        raise DomainError(f"no smoothing radius among {hs} lies in (0, pi/2)")
    return terms


def k_functional_upper(
    f: RealFunction, delta: float, p: float, h_candidates: Sequence[float] | None = None
) -> float:
    """Upper bound on ``K_p(f, delta) = inf_g ||f - g||_p + delta ||g'||_inf``.

    The infimum is replaced by a minimum over Steklov means with radii
    ``h_candidates`` (default ``delta * (1/2, 1, 2, 4, 8)``, restricted to
    ``(0, pi/2)``) and, for C1 ``f``, ``g = f``.
    """
    return min(value for _, value in k_functional_terms(f, delta, p, h_candidates))
