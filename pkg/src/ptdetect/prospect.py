"""Prospect-theory primitives: probability weighting, cost valuation and
behavioral classification of agents.

The weight family is the power law ``w(p) = p**alpha``.  Two value families
are available: the exponential ``v(c) = exp(c) - exp(c_star)`` (default) and a
linear ``v(c) = c - c_star`` used to reduce an unbiased agent to the classical
Bayes detector.

All functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EXP_CLAMP",
    "VALUE_FAMILIES",
    "AgentProfile",
    "Attitude",
    "AttitudeClass",
    "CostMatrix",
    "CostRegime",
    "classify_attitude",
    "classify_cost_regime",
    "value",
    "weight",
    "weight_deriv",
]

# |c| beyond this overflows exp() in double precision.
EXP_CLAMP = 700.0

VALUE_FAMILIES = ("exponential", "linear")


@dataclass(frozen=True)
class AgentProfile:
    """Behavioral parameters of a decision maker.

    Attributes:
        alpha: exponent of the weight function ``w(p) = p**alpha``.
        c_star: reference cost; ``v(c_star) = 0``.
        value_family: ``"exponential"`` or ``"linear"``.
    """

    alpha: float
    c_star: float
    value_family: str = "exponential"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be a positive finite number, got {self.alpha!r}")
        if not math.isfinite(self.c_star):
            raise ValueError(f"c_star must be finite, got {self.c_star!r}")
        if self.value_family not in VALUE_FAMILIES:
            raise ValueError(
                f"value_family must be one of {VALUE_FAMILIES}, got {self.value_family!r}"
            )


@dataclass(frozen=True)
class CostMatrix:
    """Decision costs; ``cij`` is the cost of deciding ``u=i`` when ``theta=j``."""

    c00: float
    c01: float
    c10: float
    c11: float

    def __post_init__(self):
        for name in ("c00", "c01", "c10", "c11"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val!r}")
        if self.c10 < self.c00 or self.c01 < self.c11:
            warnings.warn(
                "cost matrix rewards an error more than the matching correct decision "
                f"(c00={self.c00}, c01={self.c01}, c10={self.c10}, c11={self.c11})",
                stacklevel=2,
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c00, self.c01, self.c10, self.c11)

    @classmethod
    def symmetric(cls, c_low: float, c_high: float) -> "CostMatrix":
        """Costs with ``c00 = c11 = c_low`` and ``c01 = c10 = c_high``."""
        return cls(c00=c_low, c01=c_high, c10=c_high, c11=c_low)


class Attitude(enum.Enum):
    OPTIMIST = "Optimist"
    UNBIASED = "Unbiased"
    PESSIMIST = "Pessimist"


@dataclass(frozen=True)
class AttitudeClass:
    """Attitude plus the inflection point ``p_star`` of the weight function.

    ``p_star`` is 1 for optimists (concave everywhere), 0 for pessimists
    (convex everywhere) and ``None`` for the unbiased identity weight.
    """

    attitude: Attitude
    p_star: float | None


class CostRegime(enum.Enum):
    TYPE1 = "Type1"  # every cost at or above the reference point
    TYPE2 = "Type2"  # every cost at or below the reference point
    MIXED = "Mixed"


def weight(p, profile: AgentProfile):
    """Probability weight ``p**alpha``. Raises ValueError outside [0, 1]."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("weight() is defined for probabilities in [0, 1]")
    out = np.power(arr, profile.alpha)
    return float(out) if out.ndim == 0 else out


def weight_deriv(p, profile: AgentProfile):
    """Derivative ``alpha * p**(alpha - 1)``.

    At ``p = 0`` with ``alpha < 1`` the derivative diverges and ``+inf`` is
    returned.  Callers that care (the solver) never evaluate it there.
    """
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("weight_deriv() is defined for probabilities in [0, 1]")
    a = profile.alpha
    with np.errstate(divide="ignore"):
        out = a * np.power(arr, a - 1.0)
    return float(out) if out.ndim == 0 else out


def value(c, profile: AgentProfile):
    """Perceived cost, zero at ``profile.c_star`` and strictly increasing."""
    arr = np.asarray(c, dtype=float)
    if profile.value_family == "linear":
        out = arr - profile.c_star
    else:
        lo, hi = -EXP_CLAMP, EXP_CLAMP
        # same exp for both terms so that v(c_star) is exactly zero
        out = np.exp(np.clip(arr, lo, hi)) - np.exp(np.clip(profile.c_star, lo, hi))
    return float(out) if out.ndim == 0 else out


def classify_attitude(profile: AgentProfile) -> AttitudeClass:
    # exact comparison: alpha == 1 is a deliberate configuration choice
    if profile.alpha < 1.0:
        return AttitudeClass(Attitude.OPTIMIST, 1.0)
    if profile.alpha > 1.0:
        return AttitudeClass(Attitude.PESSIMIST, 0.0)
    return AttitudeClass(Attitude.UNBIASED, None)


def classify_cost_regime(profile: AgentProfile, costs: CostMatrix) -> CostRegime:
    """Type1 if every cost is perceived as a loss, Type2 if every cost is a gain.

    When both hold (all costs equal ``c_star``) Type1 wins.
    """
    cs = costs.as_tuple()
    if profile.c_star <= min(cs):
        return CostRegime.TYPE1
    if profile.c_star >= max(cs):
        return CostRegime.TYPE2
    return CostRegime.MIXED
