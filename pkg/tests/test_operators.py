import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grunwald_durrmeyer import (
    BATTERY,
    ConfigurationError,
    DomainError,
    EvaluationError,
    RealFunction,
    battery_function,
    build_rule,
    chebyshev_nodes,
    constant,
    durrmeyer_apply,
    durrmeyer_coefficients,
    durrmeyer_operator,
    grunwald_apply,
    lagrange_apply,
    linear_combination,
    operator_error,
)
from grunwald_durrmeyer.analysis import ConvergenceRecord, RateModel, rate_fit
from grunwald_durrmeyer.functions import CONTINUOUS_LABELS, difference
from grunwald_durrmeyer.operators import Resolution, apply_operator, norm_label, operator_norm_ratio, parse_norm

# D_8(spike)(0), from kernel averages computed with mpmath quadrature at 25 digits.
SPIKE_D8_AT_ZERO = -0.01027856065798674570966839


def newton_interpolant(xs, ys, x):
    """Divided-difference oracle, independent of the package's basis functions."""
    coef = list(ys)
    m = len(xs)
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    value = coef[-1]
    for i in range(m - 2, -1, -1):
        value = value * (x - xs[i]) + coef[i]
    return value


# -- functions ---------------------------------------------------------------


def test_battery_metadata():
    assert set(CONTINUOUS_LABELS) == {"one", "theta", "theta_sq", "sin", "cos", "abs_mid", "sqrt_mid", "spike"}
    assert BATTERY["step"].breakpoints == (math.pi / 2,)
    assert BATTERY["step"](math.pi / 2) == 1.0
    assert BATTERY["spike"](5 * math.pi / 16) == 1.0
    with pytest.raises(DomainError):
        battery_function("nope")


def test_real_function_validation():
    with pytest.raises(DomainError):
        RealFunction(np.sin, "smooth")
    with pytest.raises(DomainError):
        RealFunction(np.sign, "step")
    with pytest.raises(DomainError):
        RealFunction(np.abs, "lipschitz")


def test_combinations_keep_weakest_class():
    f = linear_combination([2.0, -1.0], [BATTERY["sin"], BATTERY["abs_mid"]])
    assert f.smoothness == "lipschitz" and f.lipschitz == pytest.approx(3.0)
    assert f(1.0) == pytest.approx(2 * math.sin(1.0) - abs(1.0 - math.pi / 2))
    g = difference(BATTERY["step"], BATTERY["theta"])
    assert g.smoothness == "step" and g.breakpoints == (math.pi / 2,)
    h = linear_combination([1.0, 1.0], [BATTERY["sin"], BATTERY["cos"]])
    assert h.derivative(0.3) == pytest.approx(math.cos(0.3) - math.sin(0.3))


def test_constant_broadcasts():
    one = constant(1.0)
    assert one(0.2) == 1.0
    assert one(np.zeros((2, 3))).shape == (2, 3)


# -- Lagrange and Grunwald ---------------------------------------------------


def test_lagrange_reproduces_constants_and_interpolates():
    assert lagrange_apply(9, constant(1.0), 0.77) == pytest.approx(1.0, abs=1e-13)
    theta = BATTERY["theta"]
    nodes = chebyshev_nodes(7).angles
    np.testing.assert_allclose(lagrange_apply(7, theta, nodes), nodes, atol=1e-13)


def test_lagrange_matches_divided_differences():
    n, t = 8, 1.0
    nodes = chebyshev_nodes(n).angles
    oracle = newton_interpolant(np.cos(nodes), np.sin(nodes), math.cos(t))
    assert lagrange_apply(n, BATTERY["sin"], t) == pytest.approx(oracle, abs=1e-9)


def test_grunwald_examples():
    grid = np.linspace(0, math.pi, 101)
    np.testing.assert_allclose(grunwald_apply(11, constant(1.0), grid), 1.0, atol=1e-13)
    np.testing.assert_allclose(grunwald_apply(1, BATTERY["sin"], grid), 1.0, atol=1e-15)


def test_grunwald_rate_for_lipschitz_function():
    f = BATTERY["abs_mid"]
    ns = [8, 16, 32, 64, 128]
    errors = [operator_error(n, f, "grunwald", "sup") for n in ns]
    # An upper-bound trend: error * n / log n must not grow.
    scaled = [e * n / math.log(n) for e, n in zip(errors, ns)]
    assert all(b <= a for a, b in zip(scaled, scaled[1:]))
    records = [ConvergenceRecord(n, "abs_mid", "grunwald", "sup", e, RateModel().value(n)) for n, e in zip(ns, errors)]
    assert 0.7 <= rate_fit(records).slope <= 1.3


# -- Durrmeyer ---------------------------------------------------------------


def test_coefficients_of_constants():
    c = durrmeyer_coefficients(13, constant(1.0))
    np.testing.assert_allclose(c.c, 1.0, atol=1e-9)
    np.testing.assert_allclose(durrmeyer_coefficients(2, constant(5.0)).c, [5.0, 5.0], atol=1e-12)
    assert c.rule_descriptor == "gauss-legendre[panels=64,points=10]"


def test_degree_one_gives_the_mean():
    c = durrmeyer_coefficients(1, BATTERY["sin"])
    assert c.c[0] == pytest.approx(2 / math.pi, abs=1e-10)
    grid = np.linspace(0, math.pi, 9)
    np.testing.assert_allclose(durrmeyer_apply(c, grid), 2 / math.pi, atol=1e-10)


def test_midpoint_symmetry_for_identity():
    c = durrmeyer_coefficients(16, BATTERY["theta"])
    assert durrmeyer_apply(c, math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-2)
    assert durrmeyer_apply(c, math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-12)


def test_under_resolved_rule_requires_override():
    coarse = build_rule(64, 10)
    with pytest.raises(ConfigurationError):
        durrmeyer_coefficients(32, BATTERY["sin"], coarse)
    forced = durrmeyer_coefficients(32, BATTERY["sin"], coarse, force=True)
    assert forced.n == 32


def test_non_finite_samples_raise():
    pole = RealFunction(lambda t: np.where(t < 0.5, np.inf, t), "generic_lp", "pole")
    with pytest.raises(EvaluationError) as info:
        grunwald_apply(4, pole, 1.0)
    assert info.value.abscissa == pytest.approx(math.pi / 8)
    rule = build_rule(64, 10, breakpoints=[1.0])
    with pytest.raises(EvaluationError) as info:
        durrmeyer_coefficients(4, RealFunction(lambda t: np.where(t > 3.0, np.inf, 0.0), "generic_lp"), rule)
    assert info.value.abscissa > 3.0


def test_non_positivity_witness_matches_oracle():
    approx = durrmeyer_operator(8, BATTERY["spike"])
    assert approx(0.0) == pytest.approx(SPIKE_D8_AT_ZERO, abs=1e-12)


def test_operator_error_of_constant_is_zero():
    for op in ("grunwald", "durrmeyer"):
        for norm in ("sup", "L1", "L2", 3):
            assert operator_error(24, constant(1.0), op, norm) < 1e-9


def test_apply_operator_rejects_unknown_kind():
    with pytest.raises(DomainError):
        apply_operator("bernstein", 4, BATTERY["sin"])


@pytest.mark.parametrize(
    "text, p", [("sup", math.inf), ("L1", 1.0), ("l2", 2.0), ("lp(3)", 3.0), (2, 2.0), ("sup_grid", math.inf)]
)
def test_parse_norm(text, p):
    assert parse_norm(text) == p


@pytest.mark.parametrize("text", ["L0.5", "banana", 0])
def test_parse_norm_rejects(text):
    with pytest.raises(DomainError):
        parse_norm(text)


def test_norm_label_round_trip():
    for p in (math.inf, 1.0, 2.0, 2.5):
        assert parse_norm(norm_label(p)) == p


def test_operator_norm_ratio_is_at_most_about_one_for_l1():
    for label in ("sin", "step", "spike"):
        assert operator_norm_ratio(32, BATTERY[label], "durrmeyer", "L1") < 1.05


def test_operators_shape_output_like_input():
    approx = durrmeyer_operator(5, BATTERY["cos"])
    assert approx(np.zeros((2, 3))).shape == (2, 3)
    assert isinstance(approx(0.3), float)
    assert apply_operator("grunwald", 5, BATTERY["cos"])(np.zeros((4, 1))).shape == (4, 1)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(1, 40),
    a=st.floats(-10, 10),
    b=st.floats(-10, 10),
    theta=st.floats(0.0, math.pi),
)
def test_durrmeyer_is_linear(n, a, b, theta):
    f, g = BATTERY["sin"], BATTERY["abs_mid"]
    combo = linear_combination([a, b], [f, g])
    lhs = durrmeyer_operator(n, combo)(theta)
    rhs = a * durrmeyer_operator(n, f)(theta) + b * durrmeyer_operator(n, g)(theta)
    assert lhs == pytest.approx(rhs, abs=1e-11)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 64), theta=st.floats(0.0, math.pi), value=st.floats(-1e6, 1e6))
def test_durrmeyer_reproduces_constants(n, theta, value):
    assert durrmeyer_operator(n, constant(value))(theta) == pytest.approx(value, abs=1e-12 * max(1.0, abs(value)))


@settings(max_examples=20, deadline=None)
@given(n=st.integers(1, 48), theta=st.floats(0.0, math.pi))
def test_reflection_commutes_with_operator(n, theta):
    # Reflecting f about pi/2 reflects D_n(f), since S_k(t) = S_{n+1-k}(pi - t).
    f = BATTERY["theta_sq"]
    reflected = RealFunction(lambda t: (math.pi - t) ** 2, "c1", "reflected")
    assert durrmeyer_operator(n, reflected)(theta) == pytest.approx(durrmeyer_operator(n, f)(math.pi - theta), abs=1e-11)


def test_resolution_rule_uses_breakpoints():
    rule = Resolution(panels_per_n=4).rule(16, (1.0,))
    assert 1.0 in rule.edges and rule.panels == 65
