import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grunwald_durrmeyer import BATTERY, DomainError, EvaluationError, build_rule, integrate, lp_norm
from grunwald_durrmeyer.kernel import kernel_matrix
from grunwald_durrmeyer.quadrature import default_rule, principal_value, sup_norm_on_grid, uniform_grid


def test_polynomial_exactness_single_panel():
    rule = build_rule(1, 5)
    assert integrate(rule, lambda t: t**4) == pytest.approx(math.pi**5 / 5, abs=1e-12)


def test_sine_integral():
    assert integrate(build_rule(64, 10), np.sin) == pytest.approx(2.0, abs=1e-12)


def test_oscillatory_integrand_resolved():
    n = 32
    rule = build_rule(4 * n, 10)
    assert integrate(rule, lambda t: np.cos(n * t) ** 2) == pytest.approx(math.pi / 2, abs=1e-10)


def test_constant_integrates_to_pi():
    assert integrate(build_rule(3, 2), lambda t: 1.0) == pytest.approx(math.pi, abs=1e-14)


def test_kernel_mass_with_coarse_rule():
    rule = build_rule(32, 10)
    value = integrate(rule, lambda t: kernel_matrix(8, t, [3])[0])
    assert value == pytest.approx(math.pi / 8, abs=1e-9)


def test_cosine_kernel_principal_value():
    n, theta = 6, 1.0
    value = principal_value(lambda u: np.cos(n * u) / (np.cos(u) - math.cos(theta)), theta)
    assert value == pytest.approx(math.pi * math.sin(n * theta) / math.sin(theta), abs=1e-6)


@pytest.mark.parametrize("panels, points", [(0, 10), (4, 1), (4, 0), (2.5, 10)])
def test_build_rule_rejects_degenerate_sizes(panels, points):
    with pytest.raises(DomainError):
        build_rule(panels, points)


def test_breakpoints_become_panel_edges():
    rule = build_rule(4, 10, breakpoints=[1.0, math.pi / 2])
    assert 1.0 in rule.edges
    assert rule.panels == 5  # pi/2 is already an edge of 4 equal panels
    assert rule.descriptor == "gauss-legendre[panels=5,points=10]"
    assert np.all(np.diff(rule.edges) > 0)


def test_default_rule_size():
    assert default_rule(8).panels == 64
    assert default_rule(100).panels == 400


def test_evaluation_error_reports_abscissa():
    rule = build_rule(4, 3)
    with pytest.raises(EvaluationError) as info:
        integrate(rule, lambda t: np.where(t > 2.0, np.nan, t))
    assert info.value.abscissa > 2.0
    assert info.value.abscissa in rule.nodes


def test_lp_norm_examples():
    rule = build_rule(64, 10)
    assert lp_norm(rule, lambda t: 1.0, 1) == pytest.approx(math.pi, abs=1e-13)
    assert lp_norm(rule, np.sin, 2) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-13)
    step = BATTERY["step"]
    assert lp_norm(build_rule(64, 10, step.breakpoints), step, 1) == pytest.approx(math.pi / 2, abs=1e-12)
    # Misaligned: a panel straddles the jump, so only the coarse tolerance applies.
    assert lp_norm(build_rule(63, 10), step, 1) == pytest.approx(math.pi / 2, abs=1e-3)


def test_lp_norm_rejects_small_p():
    with pytest.raises(DomainError):
        lp_norm(build_rule(4, 4), np.sin, 0.5)


def test_sup_norm_examples():
    assert sup_norm_on_grid(np.sin, uniform_grid(1001)) == pytest.approx(1.0, abs=1e-6)
    assert sup_norm_on_grid(lambda t: 0.0 * t, uniform_grid(11)) == 0.0
    with pytest.raises(DomainError):
        sup_norm_on_grid(np.sin, [])


def test_uniform_grid_offset():
    grid = uniform_grid(5, offset=1e-6)
    assert grid[0] == 1e-6 and grid[-1] == pytest.approx(math.pi - 1e-6)


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(-1e3, 1e3), p=st.sampled_from([1.0, 1.5, 2.0, 3.0, 7.0]))
def test_lp_norm_is_absolutely_homogeneous(scale, p):
    rule = build_rule(16, 6)
    base = lp_norm(rule, np.cos, p)
    assert lp_norm(rule, lambda t: scale * np.cos(t), p) == pytest.approx(abs(scale) * base, rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), panels=st.integers(1, 20))
def test_integrate_is_linear(a, b, panels):
    rule = build_rule(panels, 8)
    combined = integrate(rule, lambda t: a * np.sin(t) + b * t**2)
    assert combined == pytest.approx(a * integrate(rule, np.sin) + b * integrate(rule, lambda t: t**2), abs=1e-11)


@settings(max_examples=40, deadline=None)
@given(p=st.floats(1.0, 6.0))
def test_lp_norm_triangle_inequality(p):
    rule = build_rule(32, 8)
    f, g = np.sin, lambda t: np.abs(t - 1.0)
    assert lp_norm(rule, lambda t: f(t) + g(t), p) <= lp_norm(rule, f, p) + lp_norm(rule, g, p) + 1e-12
