"""Chebyshev angles, Lagrange fundamental functions and averaged Grunwald kernels.

Everything here lives in the angular variable ``t`` on ``[0, pi]``.  The
Lagrange fundamental function for the first-kind Chebyshev nodes is

    P_k(t) = (-1)**(k+1) * cos(n t) * sin(theta_k) / (n * (cos t - cos theta_k))

and the averaged kernel is ``S_k(t) = (P_k(t - a) + P_k(t + a)) / 2`` with
``a = pi / (2n)``.  Indices ``k`` are 1-based, matching the usual notation;
arrays are 0-based, so ``angles[k - 1]`` is ``theta_k``.

Two evaluation paths exist for ``P_k``.  The ``direct`` path is the closed
form above with a guarded removable singularity.  The ``series`` path uses
the discrete orthogonality of Chebyshev polynomials,

    P_k(t) = (1 + 2 * sum_{j=1}^{n-1} cos(j theta_k) cos(j t)) / n,

which has no singularity at all and is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError

Path = Literal["direct", "series"]

# |cos t - cos theta_k| below this (times max(1, |sin theta_k|)) switches the
# direct formula over to its Taylor expansion.
SINGULARITY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class NodeSet:
    """Chebyshev angles ``theta_k = (2k - 1) pi / (2n)`` for ``k = 1..n``."""

    n: int
    angles: np.ndarray

    def __len__(self) -> int:
        return self.n

    def angle(self, k: int) -> float:
        """Return ``theta_k`` for a 1-based index."""
        _check_index(self.n, k)
        return float(self.angles[k - 1])

    @property
    def cosines(self) -> np.ndarray:
        """The nodes ``x_k = cos(theta_k)`` on ``[-1, 1]`` (decreasing)."""
        return np.cos(self.angles)


@dataclass(frozen=True)
class KernelTable:
    """Values ``values[k-1, j] = S_k(grid[j])`` for one degree ``n``."""

    n: int
    grid: np.ndarray
    values: np.ndarray
    path: str = "series"

    @property
    def column_sums(self) -> np.ndarray:
        return self.values.sum(axis=0)

    @property
    def lebesgue_sums(self) -> np.ndarray:
        """``sum_k |S_k(t)|`` at every grid point."""
        return np.abs(self.values).sum(axis=0)


def _check_degree(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"degree n must be a positive integer, got {n!r}")
    return int(n)


def _check_index(n, k):
    k_arr = np.asarray(k)
    if np.any(k_arr < 1) or np.any(k_arr > n) or np.any(k_arr != np.floor(k_arr)):
        raise DomainError(f"node index must lie in 1..{n}, got {k!r}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def node_angles(n: int, k) -> np.ndarray:
    """``theta_k`` for (possibly array-valued) 1-based ``k``."""
    return (2.0 * np.asarray(k, dtype=float) - 1.0) * np.pi / (2.0 * n)


def chebyshev_nodes(n: int) -> NodeSet:
    """Chebyshev angles of the first kind, in increasing order.

    Parameters
    ----------
    n : int
        Number of nodes (the operator degree), ``n >= 1``.

    Returns
    -------
    NodeSet
        ``angles[k-1] = (2k - 1) pi / (2n)``.
    """
    n = _check_degree(n)
    return NodeSet(n=n, angles=_readonly(node_angles(n, np.arange(1, n + 1))))


def _as_output(value: np.ndarray, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(value)
    return value


def lagrange_basis_direct(n: int, k, t):
    """Evaluate ``P_k(t)`` with the closed form.

    Works for any real ``t``.  Where the denominator ``cos t - cos theta_k``
    nearly vanishes (``t`` close to ``+-theta_k + 2 pi m``) the quotient is
    replaced by a second-order Taylor expansion of numerator and denominator
    about the exact root.  ``k`` and ``t`` broadcast against each other.
    """
    n = _check_degree(n)
    _check_index(n, k)
    k_arr = np.asarray(k)
    t_arr = np.asarray(t, dtype=float)
    k_b, t_b = np.broadcast_arrays(k_arr, t_arr)
    theta = node_angles(n, k_b)
    sign = np.where(k_b % 2 == 1, 1.0, -1.0)
    sin_k = np.sin(theta)

    denom = np.cos(t_b) - np.cos(theta)
    guard = np.abs(denom) < SINGULARITY_THRESHOLD * np.maximum(1.0, np.abs(sin_k))

    out = np.empty(t_b.shape, dtype=float)
    safe = ~guard
    out[safe] = sign[safe] * np.cos(n * t_b[safe]) * sin_k[safe] / (n * denom[safe])

    if np.any(guard):
        tg, thg = t_b[guard], theta[guard]
        # Nearest root of the denominator: +theta_k or -theta_k, shifted by 2 pi m.
        plus = thg + 2.0 * np.pi * np.round((tg - thg) / (2.0 * np.pi))
        minus = -thg + 2.0 * np.pi * np.round((tg + thg) / (2.0 * np.pi))
        t0 = np.where(np.abs(tg - plus) <= np.abs(tg - minus), plus, minus)
        h = tg - t0
        num1 = -n * np.sin(n * t0)
        num2 = -(n**2) * np.cos(n * t0)
        den1 = -np.sin(t0)
        den2 = -np.cos(t0)
        ratio = (num1 + 0.5 * num2 * h) / (den1 + 0.5 * den2 * h)
        out[guard] = sign[guard] * sin_k[guard] / n * ratio
    return _as_output(out, k, t)


def lagrange_basis_series(n: int, k, t):
    """Evaluate ``P_k(t)`` through its cosine series (no singularities)."""
    n = _check_degree(n)
    _check_index(n, k)
    k_b, t_b = np.broadcast_arrays(np.asarray(k), np.asarray(t, dtype=float))
    theta = node_angles(n, k_b)
    acc = np.zeros(t_b.shape, dtype=float)
    for j in range(1, n):
        acc += np.cos(j * theta) * np.cos(j * t_b)
    return _as_output((1.0 + 2.0 * acc) / n, k, t)


_BASIS = {"direct": lagrange_basis_direct, "series": lagrange_basis_series}


def _basis(path: str):
    try:
        return _BASIS[path]
    except KeyError:
        raise DomainError(f"unknown evaluation path {path!r}; use 'direct' or 'series'") from None


def _check_interval(t, lo=0.0, hi=np.pi):
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < lo) or np.any(t_arr > hi) or np.any(~np.isfinite(t_arr)):
        raise DomainError(f"abscissae must lie in [{lo}, {hi}]")
    return t_arr


def kernel_eval(n: int, k, t, path: Path = "series"):
    """Averaged kernel ``S_k(t) = (P_k(t - pi/2n) + P_k(t + pi/2n)) / 2``.

    The shifted arguments may leave ``[0, pi]``; ``P_k`` is evaluated there
    as written, with no reflection or clamping.
    """
    n = _check_degree(n)
    _check_interval(t)
    basis = _basis(path)
    shift = np.pi / (2.0 * n)
    t_arr = np.asarray(t, dtype=float)
    value = 0.5 * (basis(n, k, t_arr - shift) + basis(n, k, t_arr + shift))
    return _as_output(np.asarray(value), k, t)


def kernel_series_coefficients(n: int, ks=None) -> np.ndarray:
    """Cosine coefficients of ``S_k``: ``S_k(t) = sum_j A[k, j] cos(j t)``.

    Averaging the two shifted copies of ``P_k`` multiplies the ``j``-th
    harmonic by ``cos(j pi / 2n)``.
    """
    n = _check_degree(n)
    ks = np.arange(1, n + 1) if ks is None else np.atleast_1d(np.asarray(ks))
    _check_index(n, ks)
    j = np.arange(n)
    weight = np.where(j == 0, 1.0, 2.0) * np.cos(j * np.pi / (2.0 * n)) / n
    return np.cos(np.outer(node_angles(n, ks), j)) * weight


def kernel_matrix(n: int, t, ks=None) -> np.ndarray:
    """All kernels at once: row ``i`` holds ``S_{ks[i]}`` at the points ``t``.

    Same values as the ``series`` path of :func:`kernel_eval`, computed as a
    single matrix product.  ``t`` is not restricted to ``[0, pi]``.
    """
    coeffs = kernel_series_coefficients(n, ks)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    return coeffs @ np.cos(np.outer(np.arange(n), t_arr))


def kernel_table(n: int, grid, path: Path = "series") -> KernelTable:
    """Tabulate every ``S_k`` on a sorted grid in ``[0, pi]``."""
    n = _check_degree(n)
    grid_arr = np.asarray(grid, dtype=float).ravel()
    if grid_arr.size == 0:
        raise DomainError("kernel_table needs a nonempty grid")
    if np.any(np.diff(grid_arr) < 0):
        raise DomainError("kernel_table grid must be sorted")
    _check_interval(grid_arr)
    if path == "series":
        values = kernel_matrix(n, grid_arr)
    else:
        ks = np.arange(1, n + 1)[:, None]
        values = np.asarray(kernel_eval(n, ks, grid_arr[None, :], path=path))
    return KernelTable(n=n, grid=_readonly(grid_arr.copy()), values=_readonly(values), path=path)


def kernel_tail_bound(n: int, k, t):
    """Grunwald's far-field bound ``pi^3 / (4 n^2) / (|t - theta_k| - pi/2n)^2``.

    Only meaningful where ``|t - theta_k| > pi / (2n)``; returns ``inf``
    elsewhere.
    """
    n = _check_degree(n)
    _check_index(n, k)
    gap = np.abs(np.asarray(t, dtype=float) - node_angles(n, k)) - np.pi / (2.0 * n)
    with np.errstate(divide="ignore"):
        bound = np.where(gap > 0, np.pi**3 / (4.0 * n**2) / np.where(gap > 0, gap, 1.0) ** 2, np.inf)
    return _as_output(bound, k, t)
