"""Behavioral and Bayes risk along the ROC.

For an operating point ``(x, y)`` the behavioral risk splits as
``f = g(x) + h(y)`` with

    g(x) = w(pi0 (1 - x)) v(c00) + w(pi0 x) v(c10)
    h(y) = w(pi1 (1 - y)) v(c01) + w(pi1 y) v(c11)

Along the ROC ``y = y(x)`` and the problem becomes one-dimensional in ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detection import GaussianShiftModel, OperatingPoint, Priors, q, q_inv, roc_deriv
from .prospect import AgentProfile, CostMatrix, value, weight, weight_deriv

__all__ = [
    "CURVATURE_STEP",
    "RiskBreakdown",
    "Scenario",
    "bayes_risk",
    "behavioral_risk",
    "foc_residual",
    "g_of_x",
    "g_prime",
    "h_of_y",
    "h_prime",
    "risk_along_roc",
    "risk_curvature",
    "risk_gradient",
]

CURVATURE_STEP = 1e-4


@dataclass(frozen=True)
class Scenario:
    priors: Priors
    profile: AgentProfile
    costs: CostMatrix
    model: GaussianShiftModel

    @classmethod
    def from_params(
        cls,
        pi0: float,
        alpha: float,
        c_star: float,
        costs: CostMatrix | tuple[float, float, float, float] = (-1.0, 1.0, 1.0, -1.0),
        shift: float = 1.0,
        value_family: str = "exponential",
    ) -> "Scenario":
        if not isinstance(costs, CostMatrix):
            costs = CostMatrix(*costs)
        return cls(
            priors=Priors(pi0),
            profile=AgentProfile(alpha=alpha, c_star=c_star, value_family=value_family),
            costs=costs,
            model=GaussianShiftModel(shift),
        )

    def perceived_costs(self) -> tuple[float, float, float, float]:
        """``(v(c00), v(c01), v(c10), v(c11))``."""
        return tuple(value(c, self.profile) for c in self.costs.as_tuple())


@dataclass(frozen=True)
class RiskBreakdown:
    f: float
    g: float
    h: float
    bayes: float


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def g_of_x(x, scenario: Scenario):
    """Contribution of the ``theta = 0`` branch."""
    x = np.asarray(x, dtype=float)
    pi0, prof = scenario.priors.pi0, scenario.profile
    v00, _, v10, _ = scenario.perceived_costs()
    return _out(weight(pi0 * (1.0 - x), prof) * v00 + weight(pi0 * x, prof) * v10)


def _h(y, y_bar, scenario: Scenario):
    pi1, prof = scenario.priors.pi1, scenario.profile
    _, v01, _, v11 = scenario.perceived_costs()
    return weight(pi1 * y_bar, prof) * v01 + weight(pi1 * y, prof) * v11


def h_of_y(y, scenario: Scenario):
    """Contribution of the ``theta = 1`` branch."""
    y = np.asarray(y, dtype=float)
    return _out(_h(y, 1.0 - y, scenario))


def g_prime(x, scenario: Scenario):
    x = np.asarray(x, dtype=float)
    pi0, prof = scenario.priors.pi0, scenario.profile
    v00, _, v10, _ = scenario.perceived_costs()
    return _out(pi0 * (weight_deriv(pi0 * x, prof) * v10 - weight_deriv(pi0 * (1.0 - x), prof) * v00))


def _h_prime(y, y_bar, scenario: Scenario):
    pi1, prof = scenario.priors.pi1, scenario.profile
    _, v01, _, v11 = scenario.perceived_costs()
    return pi1 * (weight_deriv(pi1 * y, prof) * v11 - weight_deriv(pi1 * y_bar, prof) * v01)


def h_prime(y, scenario: Scenario):
    y = np.asarray(y, dtype=float)
    return _out(_h_prime(y, 1.0 - y, scenario))


def _roc_pair(x, scenario: Scenario):
    """``(y, 1 - y)`` on the ROC, the complement taken from the other tail.

    Near ``x = 1`` the detection probability rounds toward 1 and ``1 - y``
    by subtraction keeps only a few digits, which the weight function
    then amplifies.
    """
    t = np.asarray(q_inv(x)) - scenario.model.shift
    return np.asarray(q(t)), np.asarray(q(-t))


def bayes_risk(point: OperatingPoint, priors: Priors, costs: CostMatrix) -> float:
    """Expected cost ``sum_ij Pr(u=i, theta=j) c_ij``."""
    x, y = point.x, point.y
    return (
        priors.pi0 * ((1.0 - x) * costs.c00 + x * costs.c10)
        + priors.pi1 * ((1.0 - y) * costs.c01 + y * costs.c11)
    )


def behavioral_risk(point: OperatingPoint, scenario: Scenario) -> RiskBreakdown:
    g = g_of_x(point.x, scenario)
    h = h_of_y(point.y, scenario)
    return RiskBreakdown(
        f=g + h,
        g=g,
        h=h,
        bayes=bayes_risk(point, scenario.priors, scenario.costs),
    )


def risk_along_roc(x, scenario: Scenario):
    """Behavioral risk ``f(x, y(x))``; vectorized over ``x``."""
    x = np.asarray(x, dtype=float)
    y, y_bar = _roc_pair(x, scenario)
    return _out(np.asarray(g_of_x(x, scenario)) + _h(y, y_bar, scenario))


def _check_interior(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("derivatives along the ROC require 0 < x < 1")
    return arr


def risk_gradient(x, scenario: Scenario):
    """``d f(x, y(x)) / dx = g'(x) + h'(y) y'(x)``."""
    x = _check_interior(x)
    y, y_bar = _roc_pair(x, scenario)
    return _out(
        np.asarray(g_prime(x, scenario))
        + _h_prime(y, y_bar, scenario) * np.asarray(roc_deriv(x, scenario.model))
    )


def foc_residual(x, scenario: Scenario):
    """Left minus right side of the stationarity equation.

    Gain-side terms (weights growing with ``x``) on the left, the terms whose
    weights shrink with ``x`` on the right.  Zero at interior stationary points.
    """
    x = _check_interior(x)
    pi0, pi1, prof = scenario.priors.pi0, scenario.priors.pi1, scenario.profile
    v00, v01, v10, v11 = scenario.perceived_costs()
    y, y_bar = _roc_pair(x, scenario)
    dy = np.asarray(roc_deriv(x, scenario.model))
    lhs = weight_deriv(pi0 * x, prof) * pi0 * v10 + weight_deriv(pi1 * y, prof) * pi1 * dy * v11
    rhs = weight_deriv(pi0 * (1.0 - x), prof) * pi0 * v00 + weight_deriv(pi1 * y_bar, prof) * pi1 * dy * v01
    return _out(lhs - rhs)


def risk_curvature(x, scenario: Scenario, step: float = CURVATURE_STEP):
    """Central second difference of :func:`risk_along_roc`; a shape diagnostic only."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 1e-3) or np.any(arr > 1.0 - 1e-3):
        raise ValueError("risk_curvature() requires 1e-3 <= x <= 1 - 1e-3")
    fp = np.asarray(risk_along_roc(arr + step, scenario))
    f0 = np.asarray(risk_along_roc(arr, scenario))
    fm = np.asarray(risk_along_roc(arr - step, scenario))
    return _out((fp - 2.0 * f0 + fm) / (step * step))
