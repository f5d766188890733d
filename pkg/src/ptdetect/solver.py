"""Optimal operating points for behavioral agents.

``solve`` first decides the shape of ``f(x, y(x))``.  Where the analytic
lemma table (optimist/pessimist x Type1/Type2) predicts a shape, that
prediction is only trusted if a numeric curvature scan agrees.  Concave
risks are minimized at a corner of the ROC, convex risks by a grid-seeded
golden-section search followed by bisection on the gradient; everything
else goes through a global grid search.  Every answer is checked against an
independent coarse grid before it is returned.
"""

from __future__ import annotations

import enum
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .detection import (
    DecisionRule,
    GaussianShiftModel,
    OperatingPoint,
    Priors,
    bayes_rule,
    point_to_rule,
    roc,
    rule_to_point,
)
from .prospect import (
    Attitude,
    CostRegime,
    classify_attitude,
    classify_cost_regime,
)
from .risk import (
    RiskBreakdown,
    Scenario,
    behavioral_risk,
    foc_residual,
    risk_along_roc,
    risk_curvature,
    risk_gradient,
)

log = logging.getLogger(__name__)

__all__ = [
    "BayesBaseline",
    "Method",
    "SWEEP_PARAMS",
    "ShapeClass",
    "ShapeLabel",
    "ShapeSource",
    "SolveReport",
    "SolverConfig",
    "SolverError",
    "classify_shape",
    "corner_solution",
    "interior_solution",
    "solve",
    "sweep",
    "with_param",
]

SCAN_POINTS = 65
SCAN_BAND = 1e-7
CHECK_GRID_POINTS = 1001
GRID_GAP_TOL = 1e-9
SWEEP_PARAMS = ("alpha", "pi0", "c_star", "shift")
WORKERS_ENV = "PTDETECT_WORKERS"

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class SolverError(RuntimeError):
    """Numeric failure; ``best_point`` holds the best point found so far (if any)."""

    def __init__(self, message: str, best_point: OperatingPoint | None = None):
        super().__init__(message)
        self.best_point = best_point


class ShapeLabel(enum.Enum):
    CONCAVE = "Concave"
    CONVEX = "Convex"
    INDETERMINATE = "Indeterminate"


class ShapeSource(enum.Enum):
    LEMMA_TABLE = "LemmaTable"
    NUMERIC_SCAN = "NumericScan"


class Method(enum.Enum):
    CORNER_ARGMIN = "CornerArgmin"
    INTERIOR_FOC = "InteriorFOC"
    GLOBAL_GRID = "GlobalGrid"


_LEMMA_TABLE = {
    (Attitude.OPTIMIST, CostRegime.TYPE1): ShapeLabel.CONCAVE,
    (Attitude.OPTIMIST, CostRegime.TYPE2): ShapeLabel.CONVEX,
    (Attitude.PESSIMIST, CostRegime.TYPE1): ShapeLabel.CONVEX,
    (Attitude.PESSIMIST, CostRegime.TYPE2): ShapeLabel.CONCAVE,
}


@dataclass(frozen=True)
class ShapeClass:
    """Shape of the risk along the ROC.

    ``lemma_label`` is the analytic prediction (``None`` when no lemma
    applies).  ``provenance`` is ``LEMMA_TABLE`` only when the scan confirmed
    that prediction.
    """

    label: ShapeLabel
    provenance: ShapeSource
    lemma_label: ShapeLabel | None
    curvature_min: float
    curvature_max: float

    @property
    def lemma_disagrees(self) -> bool:
        return self.lemma_label is not None and self.provenance is ShapeSource.NUMERIC_SCAN


@dataclass(frozen=True)
class SolverConfig:
    grid_points: int = 4097
    tol_x: float = 1e-8
    tol_foc: float = 1e-6
    max_iter: int = 200

    def __post_init__(self):
        if not (isinstance(self.grid_points, int) and self.grid_points >= 3):
            raise ValueError(f"grid_points must be an integer >= 3, got {self.grid_points!r}")
        if not (isinstance(self.max_iter, int) and self.max_iter > 0):
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        for name in ("tol_x", "tol_foc"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be a positive number, got {val!r}")


@dataclass(frozen=True)
class BayesBaseline:
    rule: DecisionRule
    point: OperatingPoint
    risk: RiskBreakdown


@dataclass(frozen=True)
class SolveReport:
    point: OperatingPoint
    rule: DecisionRule
    risk: RiskBreakdown
    shape: ShapeClass
    method: Method
    foc_residual_at_solution: float | None
    bayes_baseline: BayesBaseline | None
    grid_gap: float
    corner_risks: tuple[float, float]  # (f(0,0), f(1,1))
    attitude: Attitude
    regime: CostRegime


def classify_shape(scenario: Scenario, config: SolverConfig | None = None) -> ShapeClass:
    """Label the risk concave/convex/indeterminate from a curvature scan.

    The scan evaluates :func:`risk_curvature` on 65 interior points; values
    within ``+-1e-7`` count as zero.
    """
    xs = np.linspace(1e-3, 1.0 - 1e-3, SCAN_POINTS)
    curv = np.asarray(risk_curvature(xs, scenario))
    lo, hi = float(np.min(curv)), float(np.max(curv))
    if hi <= SCAN_BAND:
        scanned = ShapeLabel.CONCAVE
    elif lo >= -SCAN_BAND:
        scanned = ShapeLabel.CONVEX
    else:
        scanned = ShapeLabel.INDETERMINATE

    attitude = classify_attitude(scenario.profile).attitude
    regime = classify_cost_regime(scenario.profile, scenario.costs)
    predicted = _LEMMA_TABLE.get((attitude, regime))
    source = ShapeSource.LEMMA_TABLE if predicted is scanned else ShapeSource.NUMERIC_SCAN
    if predicted is not None and predicted is not scanned:
        log.info("lemma predicts %s but curvature scan says %s", predicted.value, scanned.value)
    return ShapeClass(scanned, source, predicted, lo, hi)


def _corner_risks(scenario: Scenario) -> tuple[float, float]:
    return (
        behavioral_risk(OperatingPoint(0.0, 0.0), scenario).f,
        behavioral_risk(OperatingPoint(1.0, 1.0), scenario).f,
    )


def _bayes_baseline(scenario: Scenario, bayes_mode: str) -> BayesBaseline | None:
    try:
        rule = bayes_rule(scenario.priors, scenario.costs, scenario.model, mode=bayes_mode)
    except ValueError as exc:
        log.warning("no Bayes baseline: %s", exc)
        return None
    point = rule_to_point(rule, scenario.model)
    return BayesBaseline(rule, point, behavioral_risk(point, scenario))


def _report(
    scenario: Scenario,
    x: float,
    shape: ShapeClass,
    method: Method,
    config: SolverConfig,
    bayes_mode: str,
) -> SolveReport:
    point = OperatingPoint(x, roc(x, scenario.model))
    fres = None
    if config.tol_x < x < 1.0 - config.tol_x:
        fres = float(foc_residual(x, scenario))
    check = np.asarray(risk_along_roc(np.linspace(0.0, 1.0, CHECK_GRID_POINTS), scenario))
    risk = behavioral_risk(point, scenario)
    return SolveReport(
        point=point,
        rule=point_to_rule(x, scenario.model),
        risk=risk,
        shape=shape,
        method=method,
        foc_residual_at_solution=fres,
        bayes_baseline=_bayes_baseline(scenario, bayes_mode),
        grid_gap=risk.f - float(np.min(check)),
        corner_risks=_corner_risks(scenario),
        attitude=classify_attitude(scenario.profile).attitude,
        regime=classify_cost_regime(scenario.profile, scenario.costs),
    )


def _golden(fun, a: float, b: float, tol: float, max_iter: int) -> tuple[float, float, bool]:
    """Golden-section minimization on [a, b] down to width ``tol``.

    Returns ``(x, f(x), converged)``.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    it = 0
    while b - a > tol:
        it += 1
        if it > max_iter:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    x, fx = (c, fc) if fc <= fd else (d, fd)
    return x, fx, b - a <= tol


def _polish(scenario: Scenario, x0: float, lo: float, hi: float, config: SolverConfig) -> float | None:
    """Bisection on the gradient around ``x0``; ``None`` if no sign change brackets it."""
    floor = 0.5 * config.tol_x
    lo, hi = max(lo, floor), min(hi, 1.0 - floor)
    delta = 4.0 * config.tol_x
    while True:
        a, b = max(x0 - delta, lo), min(x0 + delta, hi)
        ga, gb = float(risk_gradient(a, scenario)), float(risk_gradient(b, scenario))
        if ga < 0.0 < gb:
            break
        if a <= lo and b >= hi:
            return None
        delta *= 4.0
    for _ in range(config.max_iter):
        m = 0.5 * (a + b)
        if not (a < m < b):
            break
        gm = float(risk_gradient(m, scenario))
        if gm == 0.0:
            return m
        if gm < 0.0:
            a, ga = m, gm
        else:
            b, gb = m, gm
    # the bracket may be down to adjacent doubles; keep the smaller residual
    return a if -ga <= gb else b


def _refine(scenario: Scenario, config: SolverConfig, polish: bool = True) -> float:
    """Grid seed, golden-section refinement, optional gradient polish, corner check."""
    fun = lambda t: float(risk_along_roc(t, scenario))  # noqa: E731
    grid = np.linspace(0.0, 1.0, config.grid_points)
    vals = np.asarray(risk_along_roc(grid, scenario))
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    x, fx, converged = _golden(fun, float(lo), float(hi), config.tol_x, config.max_iter)
    if not converged:
        raise SolverError(
            f"golden-section search did not reach width {config.tol_x} in {config.max_iter} iterations",
            best_point=OperatingPoint(x, roc(x, scenario.model)),
        )

    if polish and config.tol_x < x < 1.0 - config.tol_x:
        xp = _polish(scenario, x, float(lo), float(hi), config)
        if xp is not None:
            fp = fun(xp)
            if fp <= fx + 4.0 * np.finfo(float).eps * max(1.0, abs(fx)):
                x, fx = xp, fp

    # corners are evaluated directly, never through derivatives
    f0, f1 = float(vals[0]), float(vals[-1])
    if min(f0, f1) <= fx:
        return 0.0 if f0 <= f1 else 1.0
    return x


def corner_solution(
    scenario: Scenario,
    config: SolverConfig | None = None,
    bayes_mode: str = "lrt",
    shape: ShapeClass | None = None,
) -> SolveReport:
    """Best of always-decide-0 and always-decide-1; ties go to always-decide-0."""
    config = config or SolverConfig()
    shape = shape or classify_shape(scenario, config)
    f0, f1 = _corner_risks(scenario)
    x = 1.0 if f1 < f0 else 0.0
    return _report(scenario, x, shape, Method.CORNER_ARGMIN, config, bayes_mode)


def interior_solution(
    scenario: Scenario,
    config: SolverConfig | None = None,
    bayes_mode: str = "lrt",
    shape: ShapeClass | None = None,
) -> SolveReport:
    """Stationary point of a convex risk.

    Seeded by the best point of a uniform grid, narrowed by golden-section
    search to ``tol_x`` and polished by bisection on the gradient.  If the
    minimum sits at a corner that corner is reported (still as InteriorFOC)
    and the FOC residual is not applicable.
    """
    config = config or SolverConfig()
    shape = shape or classify_shape(scenario, config)
    x = _refine(scenario, config)
    return _report(scenario, x, shape, Method.INTERIOR_FOC, config, bayes_mode)


def _global_solution(scenario, config, bayes_mode, shape) -> SolveReport:
    x = _refine(scenario, config)
    return _report(scenario, x, shape, Method.GLOBAL_GRID, config, bayes_mode)


def solve(scenario: Scenario, config: SolverConfig | None = None, bayes_mode: str = "lrt") -> SolveReport:
    config = config or SolverConfig()
    shape = classify_shape(scenario, config)
    # corner-only or FOC-only logic needs a lemma confirmed by the scan
    if shape.provenance is not ShapeSource.LEMMA_TABLE or shape.label is ShapeLabel.INDETERMINATE:
        report = _global_solution(scenario, config, bayes_mode, shape)
    elif shape.label is ShapeLabel.CONCAVE:
        report = corner_solution(scenario, config, bayes_mode, shape)
    else:
        report = interior_solution(scenario, config, bayes_mode, shape)

    if report.grid_gap > GRID_GAP_TOL and report.method is not Method.GLOBAL_GRID:
        log.warning("%s result beaten by check grid (gap %.3g); retrying with global grid",
                    report.method.value, report.grid_gap)
        report = _global_solution(scenario, config, bayes_mode, shape)
    if report.grid_gap > GRID_GAP_TOL:
        raise SolverError(f"solution exceeds check-grid minimum by {report.grid_gap:.3g}",
                          best_point=report.point)
    if report.foc_residual_at_solution is not None and abs(report.foc_residual_at_solution) > config.tol_foc:
        log.warning("FOC residual %.3g exceeds tol_foc at x=%.12g",
                    report.foc_residual_at_solution, report.point.x)
    return report


def with_param(base: Scenario, param: str, val: float) -> Scenario:
    """Copy of ``base`` with one sweepable parameter replaced."""
    if param == "alpha":
        return replace(base, profile=replace(base.profile, alpha=val))
    if param == "c_star":
        return replace(base, profile=replace(base.profile, c_star=val))
    if param == "pi0":
        return replace(base, priors=Priors(val))
    if param == "shift":
        return replace(base, model=GaussianShiftModel(val))
    raise ValueError(f"unknown sweep parameter {param!r}; expected one of {SWEEP_PARAMS}")


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(
    base: Scenario,
    param: str,
    start: float,
    stop: float,
    steps: int,
    config: SolverConfig | None = None,
    bayes_mode: str = "lrt",
    workers: int | None = None,
) -> list[tuple[float, SolveReport]]:
    """Solve ``steps`` scenarios with ``param`` spaced evenly over [start, stop].

    Returns ``(param_value, report)`` pairs in parameter order.  Each step is
    independent, so the result does not depend on ``workers``.
    """
    if param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}; expected one of {SWEEP_PARAMS}")
    if not (isinstance(steps, int) and steps >= 2):
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    if not start < stop:
        raise ValueError(f"sweep range must satisfy from < to, got {start} >= {stop}")
    config = config or SolverConfig()

    values = [float(v) for v in np.linspace(start, stop, steps)]
    scenarios = []
    for k, v in enumerate(values):
        try:
            scenarios.append(with_param(base, param, v))
        except ValueError as exc:
            raise ValueError(f"sweep step {k} ({param}={v!r}) is invalid: {exc}") from exc

    workers = workers or default_workers()
    run = lambda sc: solve(sc, config, bayes_mode)  # noqa: E731
    if workers == 1:
        reports = [run(sc) for sc in scenarios]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run, scenarios))
    return list(zip(values, reports))
