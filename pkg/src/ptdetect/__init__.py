"""Optimal binary hypothesis-testing rules for prospect-theory agents.

Optimists and pessimists with power-law probability weights and
reference-point value functions, compared against the Bayes detector on a
Gaussian shift-in-mean model.
"""

__version__ = "0.1.0"

from .detection import (
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
from .prospect import (
    AgentProfile,
    Attitude,
    CostMatrix,
    CostRegime,
    classify_attitude,
    classify_cost_regime,
    value,
    weight,
    weight_deriv,
)
from .risk import (
    RiskBreakdown,
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
from .simulation import SimulationReport, compare, simulate
from .solver import (
    Method,
    ShapeClass,
    ShapeLabel,
    ShapeSource,
    SolveReport,
    SolverConfig,
    SolverError,
    classify_shape,
    corner_solution,
    interior_solution,
    solve,
    sweep,
)

__all__ = [
    "__version__",
    "AgentProfile",
    "AlwaysH0",
    "AlwaysH1",
    "Attitude",
    "CostMatrix",
    "CostRegime",
    "GaussianShiftModel",
    "Method",
    "OperatingPoint",
    "Priors",
    "RandomizedThreshold",
    "RiskBreakdown",
    "Scenario",
    "ShapeClass",
    "ShapeLabel",
    "ShapeSource",
    "SimulationReport",
    "SolveReport",
    "SolverConfig",
    "SolverError",
    "Threshold",
    "bayes_risk",
    "bayes_rule",
    "behavioral_risk",
    "classify_attitude",
    "classify_cost_regime",
    "classify_shape",
    "compare",
    "corner_solution",
    "foc_residual",
    "g_of_x",
    "h_of_y",
    "interior_solution",
    "point_to_rule",
    "q",
    "q_inv",
    "risk_along_roc",
    "risk_curvature",
    "risk_gradient",
    "roc",
    "roc_deriv",
    "rule_to_point",
    "simulate",
    "solve",
    "sweep",
    "value",
    "weight",
    "weight_deriv",
]
