"""Gaussian shift-in-mean observation model and ROC geometry.

Under ``theta=0`` the observation is ``N(0, 1)``, under ``theta=1`` it is
``N(shift, 1)``.  A threshold rule ``u = 1 iff r >= tau`` has operating point
``(Q(tau), Q(tau - shift))`` and the ROC is ``y = Q(Q^{-1}(x) - shift)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .prospect import CostMatrix

__all__ = [
    "BAYES_MODES",
    "AlwaysH0",
    "AlwaysH1",
    "DecisionRule",
    "GaussianShiftModel",
    "OperatingPoint",
    "Priors",
    "RandomizedThreshold",
    "Threshold",
    "bayes_rule",
    "point_to_rule",
    "q",
    "q_inv",
    "roc",
    "roc_deriv",
    "rule_to_point",
]

BAYES_MODES = ("lrt", "paper-literal")

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Priors:
    """Prior probabilities; ``pi1`` is always derived from ``pi0``."""

    pi0: float

    def __post_init__(self):
        if not (0.0 <= self.pi0 <= 1.0):
            raise ValueError(f"pi0 must lie in [0, 1], got {self.pi0!r}")

    @property
    def pi1(self) -> float:
        return 1.0 - self.pi0


@dataclass(frozen=True)
class GaussianShiftModel:
    """Unit-variance Gaussian observations whose mean moves by ``shift`` under H1."""

    shift: float

    def __post_init__(self):
        if not (math.isfinite(self.shift) and self.shift > 0):
            raise ValueError(f"shift must be a positive finite number, got {self.shift!r}")


@dataclass(frozen=True)
class OperatingPoint:
    """False-alarm probability ``x`` and detection probability ``y``."""

    x: float
    y: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise ValueError(f"operating point must lie in the unit square, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class AlwaysH0:
    """Empty acceptance region: always decide ``u = 0``."""


@dataclass(frozen=True)
class AlwaysH1:
    """Whole line as acceptance region: always decide ``u = 1``."""


@dataclass(frozen=True)
class Threshold:
    """Decide ``u = 1`` iff ``r >= tau``."""

    tau: float


@dataclass(frozen=True)
class RandomizedThreshold:
    """Decide ``u = 1`` if ``r > tau``; at ``r == tau`` decide 1 with probability ``gamma``.

    For the continuous model the boundary has probability zero, so the
    operating point equals that of ``Threshold(tau)``.  The solver never
    produces this variant.
    """

    tau: float
    gamma: float

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma!r}")


DecisionRule = Union[AlwaysH0, AlwaysH1, Threshold, RandomizedThreshold]


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


def q(t):
    """Gaussian tail ``Pr(N(0,1) >= t)`` via erfc, accurate deep into both tails."""
    return _scalar_or_array(0.5 * special.erfc(np.asarray(t, dtype=float) / _SQRT2))


def q_inv(p):
    """Inverse of :func:`q`. ``q_inv(0) = +inf`` and ``q_inv(1) = -inf``."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("q_inv() is defined for probabilities in [0, 1]")
    # Q^{-1}(p) = -Phi^{-1}(p); ndtri keeps full relative accuracy for small p
    return _scalar_or_array(-special.ndtri(arr))


def roc(x, model: GaussianShiftModel):
    """Detection probability on the ROC at false-alarm probability ``x``."""
    return q(np.asarray(q_inv(x)) - model.shift)


def roc_deriv(x, model: GaussianShiftModel):
    """Slope ``dy/dx = exp(shift * tau - shift**2 / 2)`` with ``tau = q_inv(x)``.

    Undefined at the corners, where it is 0 or infinite.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("roc_deriv() requires 0 < x < 1")
    s = model.shift
    return _scalar_or_array(np.exp(s * np.asarray(q_inv(arr)) - 0.5 * s * s))


def point_to_rule(x: float, model: GaussianShiftModel) -> DecisionRule:
    """Realize the ROC point with false-alarm ``x`` as a decision rule."""
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return AlwaysH0()
    if x == 1.0:
        return AlwaysH1()
    return Threshold(tau=q_inv(x))


def rule_to_point(rule: DecisionRule, model: GaussianShiftModel) -> OperatingPoint:
    if isinstance(rule, AlwaysH0):
        return OperatingPoint(0.0, 0.0)
    if isinstance(rule, AlwaysH1):
        return OperatingPoint(1.0, 1.0)
    if isinstance(rule, (Threshold, RandomizedThreshold)):
        return OperatingPoint(q(rule.tau), q(rule.tau - model.shift))
    raise TypeError(f"not a decision rule: {rule!r}")


def bayes_rule(
    priors: Priors,
    costs: CostMatrix,
    model: GaussianShiftModel,
    mode: str = "lrt",
) -> DecisionRule:
    """Threshold rule minimizing the classical Bayes risk.

    ``mode="lrt"`` thresholds the likelihood ratio at
    ``eta = pi0 (c10 - c00) / (pi1 (c01 - c11))``, i.e. ``r >= ln(eta)/shift + shift/2``.
    ``mode="paper-literal"`` instead applies ``pi0 / pi1`` directly as the
    threshold on ``r``; it reproduces the published expressions but is not
    the Bayes optimum in general.
    """
    if mode not in BAYES_MODES:
        raise ValueError(f"bayes mode must be one of {BAYES_MODES}, got {mode!r}")
    if not costs.c01 > costs.c11:
        raise ValueError("bayes_rule requires c01 > c11 (missing a target must cost more than detecting it)")
    if not costs.c10 > costs.c00:
        raise ValueError("bayes_rule requires c10 > c00 (a false alarm must cost more than a correct rejection)")

    pi0, pi1 = priors.pi0, priors.pi1
    if pi1 == 0.0:
        return AlwaysH0()
    if mode == "paper-literal":
        return Threshold(tau=pi0 / pi1)
    if pi0 == 0.0:
        return AlwaysH1()
    eta = pi0 * (costs.c10 - costs.c00) / (pi1 * (costs.c01 - costs.c11))
    s = model.shift
    return Threshold(tau=math.log(eta) / s + 0.5 * s)
