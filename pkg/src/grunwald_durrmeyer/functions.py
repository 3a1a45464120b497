"""Real functions on [0, pi] with a declared smoothness class, and the test battery."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

SMOOTHNESS_CLASSES = ("c1", "lipschitz", "continuous", "step", "generic_lp")
_CONTINUOUS = {"c1", "lipschitz", "continuous"}


@dataclass(frozen=True)
class RealFunction:
    """A vectorised evaluator ``t -> f(t)`` on ``[0, pi]`` plus metadata.

    ``evaluator`` must accept a numpy array and return an array of the same
    shape (a scalar return is broadcast, so constants can be written as
    ``lambda t: 1.0``).  ``discontinuities`` and ``kinks`` are abscissae the
    quadrature aligns panel boundaries to.  ``derivative``, when present, is a
    vectorised ``f'`` for C1 functions.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    smoothness: str = "continuous"
    label: str = "f"
    lipschitz: float | None = None
    discontinuities: tuple[float, ...] = ()
    kinks: tuple[float, ...] = ()
    derivative: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.smoothness not in SMOOTHNESS_CLASSES:
            raise DomainError(f"unknown smoothness class {self.smoothness!r}")
        if self.smoothness == "lipschitz" and (self.lipschitz is None or self.lipschitz < 0):
            raise DomainError("a lipschitz function needs a nonnegative constant")
        if self.smoothness == "step" and not self.discontinuities:
            raise DomainError("a step function must declare its discontinuities")

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.broadcast_to(np.asarray(self.evaluator(t_arr), dtype=float), t_arr.shape)
        if out.ndim == 0:
            return float(out)
        return np.array(out)

    @property
    def is_continuous(self) -> bool:
        return self.smoothness in _CONTINUOUS

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(sorted(set(self.discontinuities) | set(self.kinks)))


def _weakest(tags: Sequence[str]) -> str:
    if "generic_lp" in tags:
        return "generic_lp"
    if "step" in tags:
        return "step"
    if "continuous" in tags:
        return "continuous"
    if "lipschitz" in tags:
        return "lipschitz"
    return "c1"


def linear_combination(coefficients: Sequence[float], functions: Sequence[RealFunction], label=None) -> RealFunction:
    """``sum_i a_i f_i`` with the weakest smoothness class of the terms."""
    coefficients = [float(a) for a in coefficients]
    functions = list(functions)
    if len(coefficients) != len(functions) or not functions:
        raise DomainError("need one coefficient per function")
    tag = _weakest([f.smoothness for f in functions])

    def evaluator(t):
        return sum(a * f(t) for a, f in zip(coefficients, functions))

    lipschitz = None
    if tag == "lipschitz":
        lipschitz = sum(abs(a) * (f.lipschitz if f.lipschitz is not None else 0.0) for a, f in zip(coefficients, functions))
        if any(f.smoothness == "c1" and f.lipschitz is None for f in functions):
            # C1 terms on a compact interval are Lipschitz, but we don't know the constant.
            tag = "continuous"
            lipschitz = None
    derivative = None
    if tag == "c1" and all(f.derivative is not None for f in functions):
        def derivative(t):
            return sum(a * f.derivative(t) for a, f in zip(coefficients, functions))
    discontinuities = tuple(sorted({d for f in functions for d in f.discontinuities}))
    if tag != "step" and tag != "generic_lp":
        discontinuities = ()
    kinks = tuple(sorted({x for f in functions for x in f.kinks}))
    if label is None:
        label = " + ".join(f"{a:g}*{f.label}" for a, f in zip(coefficients, functions))
    return RealFunction(evaluator, tag, label, lipschitz, discontinuities, kinks, derivative)


def difference(f: RealFunction, g: RealFunction, label=None) -> RealFunction:
    """``f - g``."""
    return linear_combination([1.0, -1.0], [f, g], label or f"{f.label} - {g.label}")


def constant(value: float, label: str | None = None) -> RealFunction:
    value = float(value)
    return RealFunction(
        lambda t: np.full(np.shape(t), value),
        "c1",
        label or f"const({value:g})",
        lipschitz=0.0,
        derivative=lambda t: np.zeros(np.shape(t)),
    )


HALF_PI = 0.5 * math.pi
# Spike for the non-positivity witness: a hat of half-width 0.2 on theta_3 for n = 8.
SPIKE_CENTER = 5.0 * math.pi / 16.0
SPIKE_HALF_WIDTH = 0.2


def _battery() -> dict[str, RealFunction]:
    c, w = SPIKE_CENTER, SPIKE_HALF_WIDTH
    members = [
        constant(1.0, "one"),
        RealFunction(lambda t: t, "c1", "theta", lipschitz=1.0, derivative=lambda t: np.ones(np.shape(t))),
        RealFunction(lambda t: t * t, "c1", "theta_sq", lipschitz=2 * math.pi, derivative=lambda t: 2.0 * t),
        RealFunction(np.sin, "c1", "sin", lipschitz=1.0, derivative=np.cos),
        RealFunction(np.cos, "c1", "cos", lipschitz=1.0, derivative=lambda t: -np.sin(t)),
        RealFunction(lambda t: np.abs(t - HALF_PI), "lipschitz", "abs_mid", lipschitz=1.0, kinks=(HALF_PI,)),
        RealFunction(lambda t: np.sqrt(np.abs(t - HALF_PI)), "continuous", "sqrt_mid", kinks=(HALF_PI,)),
        RealFunction(
            lambda t: np.where(t <= HALF_PI, 1.0, 0.0), "step", "step", discontinuities=(HALF_PI,)
        ),
        RealFunction(
            lambda t: np.maximum(0.0, 1.0 - np.abs(t - c) / w),
            "lipschitz",
            "spike",
            lipschitz=1.0 / w,
            kinks=(c - w, c, c + w),
        ),
    ]
    return {f.label: f for f in members}


BATTERY: dict[str, RealFunction] = _battery()
BATTERY_VERSION = "1"
CONTINUOUS_LABELS = tuple(label for label, f in BATTERY.items() if f.is_continuous)


def battery_function(label: str) -> RealFunction:
    try:
        return BATTERY[label]
    except KeyError:
        raise DomainError(f"unknown battery function {label!r}; choose from {', '.join(BATTERY)}") from None
