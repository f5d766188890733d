import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptdetect.detection import (
    AlwaysH0,
    AlwaysH1,
    GaussianShiftModel,
    OperatingPoint,
    Priors,
    RandomizedThreshold,
    Threshold,
    bayes_rule,
    point_to_rule,
    q,
    q_inv,
    roc,
    roc_deriv,
    rule_to_point,
)
from ptdetect.prospect import CostMatrix
from ptdetect.risk import bayes_risk

from oracles import bayes_risk_grid, mp_q, mp_q_inv

# mpmath, 40 digits
Q_1 = 0.1586552539314570514147674543679620775221
Q_MINUS1 = 0.8413447460685429485852325456320379224779
Q_INV_0158655 = 1.000001049431045007150122159827089092966
EXP_MINUS_HALF = 0.6065306597126334236037995349911804534419
LN3_PLUS_HALF = 1.598612288668109691395245236922525704647
Q_3 = 0.001349898031630094526651814767594977377829

UNIT = GaussianShiftModel(1.0)
SYM = CostMatrix.symmetric(-1.0, 1.0)


def test_q_examples():
    assert q(0.0) == 0.5
    assert q(np.inf) == 0.0
    assert q(-np.inf) == 1.0
    assert q(1.0) == pytest.approx(Q_1, abs=1e-15)


def test_q_matches_high_precision_erfc_deep_in_tails():
    ts = np.linspace(-8.0, 8.0, 161)
    ref = np.array([float(mp_q(t)) for t in ts])
    got = q(ts)
    assert np.max(np.abs(got - ref)) <= 1e-12
    # relative accuracy too, which 1 - CDF would lose in the upper tail
    pos = ts > 0
    np.testing.assert_allclose(got[pos], ref[pos], rtol=1e-13)


def test_q_strictly_decreasing():
    ts = np.linspace(-8, 8, 10001)
    assert np.all(np.diff(q(ts)) <= 0)
    # below about -5, q(t) rounds to 1 in double precision
    strict = np.linspace(-5, 8, 10001)
    assert np.all(np.diff(q(strict)) < 0)


def test_q_inv_examples():
    assert q_inv(0.5) == 0.0
    assert q_inv(0.158655) == pytest.approx(Q_INV_0158655, abs=1e-12)
    assert q_inv(q(0.7)) == pytest.approx(0.7, abs=1e-10)
    assert q_inv(0.0) == math.inf
    assert q_inv(1.0) == -math.inf


def test_q_q_inv_mutual_inverses():
    ps = np.concatenate([np.geomspace(1e-8, 0.5, 500), 1 - np.geomspace(1e-8, 0.5, 500)])
    np.testing.assert_allclose(q(q_inv(ps)), ps, atol=1e-10, rtol=0)


def test_q_inv_domain():
    with pytest.raises(ValueError):
        q_inv(1.5)


def test_roc_examples():
    assert roc(0.0, UNIT) == 0.0
    assert roc(1.0, UNIT) == 1.0
    assert roc(0.5, UNIT) == pytest.approx(Q_MINUS1, abs=1e-15)


@pytest.mark.parametrize("shift", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_roc_concave_increasing_above_chance(shift):
    xs = np.linspace(0.0, 1.0, 1001)
    ys = roc(xs, GaussianShiftModel(shift))
    assert ys[0] == 0.0 and ys[-1] == 1.0
    assert np.all(np.diff(ys) >= 0)
    assert np.all(np.diff(ys, 2) <= 1e-9)
    assert np.all(ys >= xs)


def test_roc_deriv_examples():
    assert roc_deriv(0.5, UNIT) == pytest.approx(EXP_MINUS_HALF, rel=1e-14)
    for s in (0.3, 1.0, 3.0):
        m = GaussianShiftModel(s)
        assert roc_deriv(0.2, m) > roc_deriv(0.8, m)
    tiny = GaussianShiftModel(1e-9)
    np.testing.assert_allclose(roc_deriv(np.linspace(0.01, 0.99, 9), tiny), 1.0, rtol=1e-7)


@pytest.mark.parametrize("shift", [0.25, 1.0, 4.0])
def test_roc_deriv_matches_finite_differences(shift):
    m = GaussianShiftModel(shift)
    rng = np.random.default_rng(5)
    xs = rng.uniform(0.01, 0.99, 100)
    # central differences in 40-digit arithmetic; double precision cancels
    # catastrophically where the slope is ~1e-8 and y ~ 1
    h = mp.mpf("1e-12")
    fd = [float((mp_q(mp_q_inv(x + h) - shift) - mp_q(mp_q_inv(x - h) - shift)) / (2 * h)) for x in xs]
    np.testing.assert_allclose(roc_deriv(xs, m), fd, rtol=1e-5)


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_roc_deriv_undefined_at_corners(x):
    with pytest.raises(ValueError):
        roc_deriv(x, UNIT)


def test_point_to_rule_examples():
    assert point_to_rule(0.0, UNIT) == AlwaysH0()
    assert point_to_rule(1.0, UNIT) == AlwaysH1()
    assert point_to_rule(0.5, UNIT) == Threshold(0.0)


def test_rule_to_point_examples():
    assert rule_to_point(AlwaysH1(), UNIT) == OperatingPoint(1.0, 1.0)
    assert rule_to_point(AlwaysH0(), UNIT) == OperatingPoint(0.0, 0.0)
    pt = rule_to_point(Threshold(0.0), UNIT)
    assert pt.x == 0.5 and pt.y == pytest.approx(Q_MINUS1, abs=1e-15)
    far = rule_to_point(Threshold(40.0), GaussianShiftModel(3.0))
    assert far.x < 1e-300 and far.y < 1e-100
    assert rule_to_point(RandomizedThreshold(0.0, 0.3), UNIT) == pt


@given(x=st.floats(0.0, 1.0), shift=st.floats(0.1, 5.0))
def test_point_rule_round_trip(x, shift):
    m = GaussianShiftModel(shift)
    pt = rule_to_point(point_to_rule(x, m), m)
    assert pt.x == pytest.approx(x, abs=1e-10)
    assert pt.y == pytest.approx(roc(x, m), abs=1e-10)


def test_bayes_rule_examples():
    assert bayes_rule(Priors(0.5), SYM, UNIT) == Threshold(0.5)
    assert bayes_rule(Priors(0.75), SYM, UNIT).tau == pytest.approx(LN3_PLUS_HALF, abs=1e-14)
    lit = bayes_rule(Priors(0.75), SYM, UNIT, mode="paper-literal")
    assert lit.tau == pytest.approx(3.0, abs=1e-15)
    assert rule_to_point(lit, UNIT).x == pytest.approx(Q_3, rel=1e-12)


def test_bayes_rule_extreme_priors():
    assert bayes_rule(Priors(0.0), SYM, UNIT) == AlwaysH1()
    assert bayes_rule(Priors(1.0), SYM, UNIT) == AlwaysH0()


@pytest.mark.parametrize(
    "pi0, shift, costs",
    [(0.75, 1.0, (-1, 1, 1, -1)), (0.25, 1.0, (-1, 1, 1, -1)), (0.4, 2.5, (0, 3, 1, 0)), (0.9, 0.5, (-2, 0, 1, -1))],
)
def test_lrt_minimizes_bayes_risk_on_dense_grid(pi0, shift, costs):
    m, cm, pr = GaussianShiftModel(shift), CostMatrix(*costs), Priors(pi0)
    pt = rule_to_point(bayes_rule(pr, cm, m), m)
    xs = np.linspace(0.0, 1.0, 10**5)
    grid = bayes_risk_grid(xs, pi0, costs, shift)
    assert bayes_risk(pt, pr, cm) <= grid.min() + 1e-12


def test_bayes_rule_rejects_degenerate_costs():
    with pytest.raises(ValueError, match="c01 > c11"):
        bayes_rule(Priors(0.5), CostMatrix(0, 1, 1, 1), UNIT)
    with pytest.raises(ValueError, match="c10 > c00"):
        bayes_rule(Priors(0.5), CostMatrix(1, 1, 1, 0), UNIT)


def test_priors_derived_and_validated():
    p = Priors(0.3)
    assert p.pi0 + p.pi1 == 1.0
    with pytest.raises(ValueError, match="pi0"):
        Priors(1.5)


@pytest.mark.parametrize("shift", [0.0, -1.0, float("inf")])
def test_model_rejects_bad_shift(shift):
    with pytest.raises(ValueError, match="shift"):
        GaussianShiftModel(shift)
