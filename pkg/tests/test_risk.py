import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptdetect.detection import OperatingPoint, Priors, roc, roc_deriv
from ptdetect.prospect import CostMatrix, value, weight
from ptdetect.risk import (
    Scenario,
    bayes_risk,
    behavioral_risk,
    foc_residual,
    g_of_x,
    h_of_y,
    risk_along_roc,
    risk_curvature,
    risk_gradient,
)

from oracles import mp_gradient, mp_risk

# mpmath, 40 digits
G0 = 0.1162720789674148148507621375944882320191
H0 = 2.236897324779877960693025940284347753286
F00 = 2.353169403747292775543788077878835985305

SYM = CostMatrix.symmetric(-1.0, 1.0)
SCAN = np.linspace(1e-3, 1 - 1e-3, 65)


def sc(pi0=0.25, alpha=0.5, c_star=-2.0, shift=1.0, costs=(-1.0, 1.0, 1.0, -1.0), family="exponential"):
    return Scenario.from_params(pi0, alpha, c_star, costs=costs, shift=shift, value_family=family)


def test_g_and_h_examples():
    s = sc()
    assert g_of_x(0.0, s) == pytest.approx(G0, rel=1e-14)
    assert h_of_y(0.0, s) == pytest.approx(H0, rel=1e-14)
    assert h_of_y(1.0, s) == pytest.approx(weight(0.75, s.profile) * value(-1.0, s.profile), rel=1e-15)
    assert g_of_x(0.0, s) == pytest.approx(weight(0.25, s.profile) * value(-1.0, s.profile), rel=1e-15)


def test_corner_risk_example():
    s = sc()
    r = behavioral_risk(OperatingPoint(0.0, 0.0), s)
    assert r.f == pytest.approx(F00, rel=1e-14)
    assert r.f == r.g + r.h


def test_identity_weight_makes_g_and_h_affine():
    s = sc(alpha=1.0, c_star=0.3)
    xs = np.linspace(0, 1, 101)
    assert np.max(np.abs(np.diff(g_of_x(xs, s), 2))) < 1e-14
    assert np.max(np.abs(np.diff(h_of_y(xs, s), 2))) < 1e-14
    pi0 = s.priors.pi0
    v00, _, v10, _ = s.perceived_costs()
    np.testing.assert_allclose(g_of_x(xs, s), pi0 * (1 - xs) * v00 + pi0 * xs * v10, atol=1e-14)


def test_unbiased_linear_reduction_is_expected_cost_shifted_by_reference():
    s = sc(alpha=1.0, c_star=0.4, family="linear")
    rng = np.random.default_rng(2)
    for x in rng.uniform(0, 1, 20):
        pt = OperatingPoint(float(x), float(roc(x, s.model)))
        r = behavioral_risk(pt, s)
        assert r.f == pytest.approx(r.bayes - 0.4, abs=1e-14)


@pytest.mark.parametrize(
    "pt, expected",
    [(OperatingPoint(0, 0), 0.5), (OperatingPoint(1, 1), -0.5)],
)
def test_bayes_risk_examples(pt, expected):
    assert bayes_risk(pt, Priors(0.25), SYM) == pytest.approx(expected, abs=1e-15)


@given(pi0=st.floats(0, 1))
def test_bayes_risk_zero_on_chance_line(pi0):
    assert bayes_risk(OperatingPoint(0.5, 0.5), Priors(pi0), SYM) == pytest.approx(0.0, abs=1e-15)


@given(
    pi0=st.floats(0.0, 1.0),
    alpha=st.floats(0.1, 5.0),
    c_star=st.floats(-3.0, 3.0),
    c_low=st.floats(-2.0, 2.0),
    gap=st.floats(0.0, 2.0),
)
@settings(max_examples=300)
def test_corner_difference_identity(pi0, alpha, c_star, c_low, gap):
    s = sc(pi0=pi0, alpha=alpha, c_star=c_star, costs=(c_low, c_low + gap, c_low + gap, c_low))
    f00 = behavioral_risk(OperatingPoint(0, 0), s).f
    f11 = behavioral_risk(OperatingPoint(1, 1), s).f
    p = s.profile
    expected = (weight(pi0, p) - weight(1 - pi0, p)) * (value(c_low + gap, p) - value(c_low, p))
    assert f11 - f00 == pytest.approx(expected, abs=1e-12)


@given(x=st.floats(0, 1), y=st.floats(0, 1), alpha=st.floats(0.1, 5.0))
def test_decomposition_is_exact(x, y, alpha):
    r = behavioral_risk(OperatingPoint(x, y), sc(alpha=alpha))
    assert r.f == r.g + r.h


@pytest.mark.parametrize("alpha", [0.3, 1.0, 3.0])
def test_sign_structure_by_regime(alpha):
    xs = np.linspace(0, 1, 1001)
    assert np.all(risk_along_roc(xs, sc(alpha=alpha, c_star=-2.0)) >= 0)
    assert np.all(risk_along_roc(xs, sc(alpha=alpha, c_star=2.0)) <= 0)
    assert np.all(g_of_x(xs, sc(alpha=alpha, c_star=-2.0)) >= 0)
    assert np.all(g_of_x(xs, sc(alpha=alpha, c_star=2.0)) <= 0)


def test_risk_along_roc_endpoints():
    s = sc()
    assert risk_along_roc(0.0, s) == behavioral_risk(OperatingPoint(0, 0), s).f
    assert risk_along_roc(1.0, s) == behavioral_risk(OperatingPoint(1, 1), s).f
    x = 0.37
    assert risk_along_roc(x, s) == behavioral_risk(OperatingPoint(x, roc(x, s.model)), s).f


GRADIENT_SCENARIOS = [
    dict(pi0=0.25, alpha=0.5, c_star=-2.0),
    dict(pi0=0.75, alpha=0.5, c_star=2.0),
    dict(pi0=0.75, alpha=2.0, c_star=-2.0),
    dict(pi0=0.5, alpha=1.0, c_star=0.0, family="linear"),
]


@pytest.mark.parametrize("params", GRADIENT_SCENARIOS)
def test_gradient_matches_high_precision_differences(params):
    s = sc(**params)
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.01, 0.99, 100)
    got = risk_gradient(xs, s)
    fam = params.pop("family", "exponential")
    ref = np.array([mp_gradient(x, **params, family=fam) for x in xs])
    np.testing.assert_allclose(got, ref, rtol=1e-5)


def test_gradient_matches_double_precision_differences_away_from_stationary_points():
    s = sc(pi0=0.25, alpha=0.5, c_star=-2.0)
    xs = np.linspace(0.05, 0.95, 50)
    h = 1e-6
    fd = (risk_along_roc(xs + h, s) - risk_along_roc(xs - h, s)) / (2 * h)
    np.testing.assert_allclose(risk_gradient(xs, s), fd, rtol=1e-5)


def test_unbiased_gradient_formula():
    s = sc(pi0=0.3, alpha=1.0, c_star=0.2, shift=1.3, family="linear")
    v00, v01, v10, v11 = s.perceived_costs()
    xs = np.linspace(0.01, 0.99, 25)
    expected = 0.3 * (v10 - v00) + 0.7 * (v11 - v01) * roc_deriv(xs, s.model)
    np.testing.assert_allclose(risk_gradient(xs, s), expected, rtol=1e-13)


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_gradient_undefined_at_endpoints(x):
    with pytest.raises(ValueError):
        risk_gradient(x, sc())
    with pytest.raises(ValueError):
        foc_residual(x, sc())


@pytest.mark.parametrize("alpha, c_star, pi0", [(0.5, 2.0, 0.25), (2.0, -2.0, 0.75), (0.3, 0.0, 0.6), (4.0, 1.0, 0.1)])
def test_foc_residual_equals_gradient(alpha, c_star, pi0):
    s = sc(pi0=pi0, alpha=alpha, c_star=c_star)
    xs = np.random.default_rng(3).uniform(1e-4, 1 - 1e-4, 100)
    g = risk_gradient(xs, s)
    r = foc_residual(xs, s)
    assert np.max(np.abs(g - r) / np.maximum(1.0, np.abs(g))) <= 1e-10


def test_foc_zero_at_slope_one_for_unbiased_symmetric_agent():
    s = sc(pi0=0.5, alpha=1.0, c_star=0.0, family="linear")
    x_unit_slope = 0.3085375387259868963622953893916622601164  # Q(1/2), mpmath
    assert roc_deriv(x_unit_slope, s.model) == pytest.approx(1.0, rel=1e-14)
    assert abs(foc_residual(x_unit_slope, s)) < 1e-14


def test_gradient_crosses_zero_at_grid_optimum():
    s = sc(pi0=0.25, alpha=0.5, c_star=2.0)
    xs = np.linspace(0, 1, 100001)
    x_star = xs[np.argmin(risk_along_roc(xs, s))]
    assert risk_gradient(x_star - 1e-3, s) < 0 < risk_gradient(x_star + 1e-3, s)


def test_type1_optimist_concave_and_type2_optimist_convex():
    concave = sc(pi0=0.75, alpha=0.5, c_star=-2.0)
    assert np.all(risk_curvature(SCAN, concave) <= 1e-8)
    for pi0 in (0.25, 0.75):
        convex = sc(pi0=pi0, alpha=0.5, c_star=2.0)
        assert np.all(risk_curvature(SCAN, convex) >= -1e-8)


@pytest.mark.parametrize("pi0", [0.25, 0.75])
def test_g_and_h_curvature_in_their_own_arguments(pi0):
    grid = np.linspace(0, 1, 2001)
    d2 = lambda f: np.diff(f, 2)  # noqa: E731
    tol = 1e-12
    for alpha, c_star, sign in [(0.5, -2.0, -1), (2.0, -2.0, 1), (0.5, 2.0, 1), (2.0, 2.0, -1)]:
        s = sc(pi0=pi0, alpha=alpha, c_star=c_star)
        assert np.all(sign * d2(g_of_x(grid, s)) >= -tol)
        assert np.all(sign * d2(h_of_y(grid, s)) >= -tol)


def test_unbiased_linear_curvature_comes_from_roc_only():
    s = sc(pi0=0.4, alpha=1.0, c_star=0.0, family="linear")
    _, v01, _, v11 = s.perceived_costs()
    xs = np.linspace(0.05, 0.95, 19)
    # f'' = h'(y) y''(x); h' = pi1 (v11 - v01) < 0 and y'' < 0, so f'' > 0
    h = 1e-4
    y2 = (roc(xs + h, s.model) - 2 * roc(xs, s.model) + roc(xs - h, s.model)) / h**2
    np.testing.assert_allclose(risk_curvature(xs, s), 0.6 * (v11 - v01) * y2, rtol=1e-6, atol=1e-6)
    assert np.all(risk_curvature(xs, s) > 0)


def test_curvature_domain():
    with pytest.raises(ValueError):
        risk_curvature(1e-4, sc())


def test_mp_oracle_agrees_with_package_risk():
    s = sc(pi0=0.3, alpha=0.7, c_star=-0.5, shift=1.7)
    for x in (0.0, 0.1, 0.5, 0.9, 1.0):
        assert risk_along_roc(x, s) == pytest.approx(float(mp_risk(x, 0.3, 0.7, -0.5, shift=1.7)), rel=1e-13, abs=1e-15)


def test_risk_accurate_where_detection_probability_rounds_to_one():
    # 1 - y must come from the other Gaussian tail, not by subtraction
    s = sc(pi0=0.25, alpha=0.3, c_star=0.0)
    for x in (1 - 1e-5, 1 - 6.05e-6, 1 - 1e-7):
        ref = float(mp_risk(x, 0.25, 0.3, 0.0))
        assert risk_along_roc(x, s) == pytest.approx(ref, abs=2e-15)
        assert risk_gradient(x, s) == pytest.approx(mp_gradient(x, 0.25, 0.3, 0.0), rel=1e-6)
