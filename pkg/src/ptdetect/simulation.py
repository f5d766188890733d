"""Seeded Monte Carlo check of the theta -> r -> u pipeline.

Trial ``i`` draws its randomness from Philox counter block ``i`` under key
``seed``: one uniform picks the hypothesis, one is turned into the Gaussian
noise through ``q_inv``, one breaks ties for randomized rules.  Because every
trial's draws depend only on ``(seed, i)``, chunked or parallel execution
gives the same counts as a serial run.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .detection import (
    AlwaysH0,
    AlwaysH1,
    DecisionRule,
    RandomizedThreshold,
    Threshold,
    q_inv,
    rule_to_point,
)
from .prospect import value, weight
from .risk import Scenario, bayes_risk, behavioral_risk, g_prime, h_prime

__all__ = [
    "CI_SIGMAS",
    "Deviation",
    "DeviationSummary",
    "SimulationReport",
    "compare",
    "scenario_digest",
    "simulate",
]

CI_SIGMAS = 3.0
CHUNK = 1 << 16
_WORDS_PER_TRIAL = 4  # one Philox block


def scenario_digest(scenario: Scenario, rule: DecisionRule) -> str:
    return hashlib.sha256(repr((scenario, rule)).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SimulationReport:
    """Empirical performance of a rule.

    ``joint_counts[i][j]`` counts trials with ``u = i`` and ``theta = j``.
    Empirical risks plug ``Pr(u=i, theta=j) = pi_j * rate`` into the risk
    formulas, with the rates ``x_hat``/``y_hat`` estimated from the counts.
    Half-widths are 3-sigma binomial intervals from the empirical rates.
    """

    trials: int
    seed: int
    x_hat: float
    y_hat: float
    joint_counts: tuple[tuple[int, int], tuple[int, int]]
    empirical_bayes_risk: float
    empirical_behavioral_risk: float
    ci_halfwidth_x: float
    ci_halfwidth_y: float
    digest: str


@dataclass(frozen=True)
class Deviation:
    name: str
    empirical: float
    analytic: float
    halfwidth: float

    @property
    def deviation(self) -> float:
        return abs(self.empirical - self.analytic)

    @property
    def passed(self) -> bool:
        return self.deviation <= self.halfwidth


@dataclass(frozen=True)
class DeviationSummary:
    x: Deviation
    y: Deviation
    bayes_risk: Deviation
    behavioral_risk: Deviation

    def __iter__(self):
        return iter((self.x, self.y, self.bayes_risk, self.behavioral_risk))

    @property
    def all_passed(self) -> bool:
        return all(d.passed for d in self)


def _uniforms(seed: int, start: int, n: int) -> np.ndarray:
    """``(n, 4)`` uniforms in (0, 1) for trials ``start .. start + n - 1``."""
    bg = np.random.Philox(key=seed)
    bg.advance(start)
    raw = bg.random_raw(n * _WORDS_PER_TRIAL).reshape(n, _WORDS_PER_TRIAL)
    # 53 high bits, offset by half an ulp so 0 and 1 never occur
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _decide(rule: DecisionRule, r: np.ndarray, tie_u: np.ndarray) -> np.ndarray:
    if isinstance(rule, AlwaysH0):
        return np.zeros(r.shape, dtype=bool)
    if isinstance(rule, AlwaysH1):
        return np.ones(r.shape, dtype=bool)
    if isinstance(rule, Threshold):
        return r >= rule.tau
    if isinstance(rule, RandomizedThreshold):
        return (r > rule.tau) | ((r == rule.tau) & (tie_u < rule.gamma))
    raise TypeError(f"not a decision rule: {rule!r}")


def _chunk_counts(scenario: Scenario, rule: DecisionRule, seed: int, start: int, n: int) -> np.ndarray:
    u = _uniforms(seed, start, n)
    theta = u[:, 0] >= scenario.priors.pi0
    r = np.asarray(q_inv(u[:, 1])) + theta * scenario.model.shift
    dec = _decide(rule, r, u[:, 2])
    counts = np.zeros((2, 2), dtype=np.int64)
    for i in (0, 1):
        for j in (0, 1):
            counts[i, j] = np.count_nonzero((dec == bool(i)) & (theta == bool(j)))
    return counts


def _halfwidth(p: float, n: int) -> float:
    if n == 0:
        return 0.0
    return CI_SIGMAS * math.sqrt(p * (1.0 - p) / n)


def simulate(
    scenario: Scenario,
    rule: DecisionRule,
    trials: int,
    seed: int,
    workers: int = 1,
) -> SimulationReport:
    if not (isinstance(trials, int) and trials >= 1):
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if not (isinstance(seed, int) and seed >= 0):
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")

    spans = [(s, min(CHUNK, trials - s)) for s in range(0, trials, CHUNK)]
    job = lambda span: _chunk_counts(scenario, rule, seed, *span)  # noqa: E731
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, spans))
    else:
        parts = [job(span) for span in spans]
    counts = np.sum(parts, axis=0)

    n0 = int(counts[:, 0].sum())
    n1 = int(counts[:, 1].sum())
    x_hat = counts[1, 0] / n0 if n0 else 0.0
    y_hat = counts[1, 1] / n1 if n1 else 0.0

    # joint probabilities from the known priors and the empirical conditional rates
    freq = _joint_probs(scenario, float(x_hat), float(y_hat))
    cost = _cost_array(scenario)
    perceived = np.asarray(value(cost, scenario.profile))
    emp_bayes = float(np.sum(freq * cost))
    emp_behav = float(np.sum(np.asarray(weight(freq, scenario.profile)) * perceived))

    return SimulationReport(
        trials=trials,
        seed=seed,
        x_hat=float(x_hat),
        y_hat=float(y_hat),
        joint_counts=tuple(tuple(int(k) for k in row) for row in counts),
        empirical_bayes_risk=emp_bayes,
        empirical_behavioral_risk=emp_behav,
        ci_halfwidth_x=_halfwidth(float(x_hat), n0),
        ci_halfwidth_y=_halfwidth(float(y_hat), n1),
        digest=scenario_digest(scenario, rule),
    )


def _joint_probs(scenario: Scenario, x: float, y: float) -> np.ndarray:
    pi0, pi1 = scenario.priors.pi0, scenario.priors.pi1
    return np.array([[pi0 * (1.0 - x), pi1 * (1.0 - y)], [pi0 * x, pi1 * y]])


def _cost_array(scenario: Scenario) -> np.ndarray:
    c = scenario.costs
    return np.array([[c.c00, c.c01], [c.c10, c.c11]])


def _rate_term(slope: float, p: float, n: int) -> float:
    # variance contribution of an estimated rate; degenerate rates contribute nothing
    if n == 0 or p <= 0.0 or p >= 1.0:
        return 0.0
    return slope * slope * p * (1.0 - p) / n


def compare(report: SimulationReport, scenario: Scenario, rule: DecisionRule) -> DeviationSummary:
    """Compare a simulation with the analytic operating point and risks.

    Half-widths are 3-sigma binomial intervals evaluated at the analytic
    rates, i.e. the spread expected if the analytic values are right.  Risk
    intervals propagate the two rate variances (delta method for the
    behavioral risk).
    """
    if report.digest != scenario_digest(scenario, rule):
        raise ValueError("simulation report was produced for a different scenario or rule")

    pt = rule_to_point(rule, scenario.model)
    n0 = sum(report.joint_counts[i][0] for i in (0, 1))
    n1 = sum(report.joint_counts[i][1] for i in (0, 1))
    pi0, pi1 = scenario.priors.pi0, scenario.priors.pi1
    c = scenario.costs

    bayes_var = _rate_term(pi0 * (c.c10 - c.c00), pt.x, n0) + _rate_term(pi1 * (c.c11 - c.c01), pt.y, n1)
    behav_var = 0.0
    if 0.0 < pt.x < 1.0:
        behav_var += _rate_term(float(g_prime(pt.x, scenario)), pt.x, n0)
    if 0.0 < pt.y < 1.0:
        behav_var += _rate_term(float(h_prime(pt.y, scenario)), pt.y, n1)

    return DeviationSummary(
        x=Deviation("x", report.x_hat, pt.x, _halfwidth(pt.x, n0)),
        y=Deviation("y", report.y_hat, pt.y, _halfwidth(pt.y, n1)),
        bayes_risk=Deviation(
            "bayes_risk",
            report.empirical_bayes_risk,
            bayes_risk(pt, scenario.priors, scenario.costs),
            CI_SIGMAS * math.sqrt(bayes_var),
        ),
        behavioral_risk=Deviation(
            "behavioral_risk",
            report.empirical_behavioral_risk,
            behavioral_risk(pt, scenario).f,
            CI_SIGMAS * math.sqrt(behav_var),
        ),
    )
