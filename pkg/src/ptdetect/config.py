"""Scenario configuration files.

A config is a JSON document::

    {
      "pi0": 0.25, "shift": 1.0, "alpha": 0.5, "c_star": -2.0,
      "costs": {"c00": -1, "c01": 1, "c10": 1, "c11": -1},
      "value_family": "exponential",          # optional, or "linear"
      "bayes_mode": "lrt",                    # optional, or "paper-literal"
      "solver": {"grid_points": 4097, "tol_x": 1e-8, "tol_foc": 1e-6, "max_iter": 200},
      "sim": {"trials": 1000000, "seed": 42}  # optional
    }

Unknown keys are rejected so that typos never silently fall back to defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .detection import BAYES_MODES, GaussianShiftModel, Priors
from .prospect import EXP_CLAMP, VALUE_FAMILIES, AgentProfile, CostMatrix
from .risk import Scenario
from .solver import SolverConfig

__all__ = ["ConfigError", "RunConfig", "SimSettings", "load_config", "parse_config"]

_TOP_KEYS = {"pi0", "shift", "alpha", "c_star", "costs", "value_family", "bayes_mode", "solver", "sim"}
_REQUIRED = ("pi0", "shift", "alpha", "c_star", "costs")
_COST_KEYS = ("c00", "c01", "c10", "c11")
_SOLVER_KEYS = {"grid_points": int, "tol_x": float, "tol_foc": float, "max_iter": int}
_SIM_KEYS = ("trials", "seed")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field


@dataclass(frozen=True)
class SimSettings:
    trials: int
    seed: int


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    solver: SolverConfig
    bayes_mode: str
    sim: SimSettings | None


def _number(raw: Any, field: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(field, f"expected a number, got {raw!r}")
    val = float(raw)
    if not math.isfinite(val):
        raise ConfigError(field, f"must be finite, got {raw!r}")
    return val


def _integer(raw: Any, field: str) -> int:
    val = _number(raw, field)
    if val != int(val):
        raise ConfigError(field, f"expected an integer, got {raw!r}")
    return int(val)


def _block(doc: dict, key: str, allowed) -> dict:
    block = doc[key]
    if not isinstance(block, dict):
        raise ConfigError(key, "expected an object")
    for k in block:
        if k not in allowed:
            raise ConfigError(f"{key}.{k}", "unknown key")
    return block


def _cost(raw: Any, field: str) -> float:
    val = _number(raw, field)
    if abs(val) > EXP_CLAMP:
        raise ConfigError(field, f"|value| must not exceed {EXP_CLAMP:g}, got {val!r}")
    return val


def parse_config(doc: Any) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    for k in doc:
        if k not in _TOP_KEYS:
            raise ConfigError(k, "unknown key")
    for k in _REQUIRED:
        if k not in doc:
            raise ConfigError(k, "missing required key")

    pi0 = _number(doc["pi0"], "pi0")
    if not 0.0 <= pi0 <= 1.0:
        raise ConfigError("pi0", f"must lie in [0, 1], got {pi0!r}")
    shift = _number(doc["shift"], "shift")
    if shift <= 0:
        raise ConfigError("shift", f"must be positive, got {shift!r}")
    alpha = _number(doc["alpha"], "alpha")
    if alpha <= 0:
        raise ConfigError("alpha", f"must be positive, got {alpha!r}")
    c_star = _cost(doc["c_star"], "c_star")

    costs_doc = _block(doc, "costs", _COST_KEYS)
    for k in _COST_KEYS:
        if k not in costs_doc:
            raise ConfigError(f"costs.{k}", "missing required key")
    costs = CostMatrix(*(_cost(costs_doc[k], f"costs.{k}") for k in _COST_KEYS))

    family = doc.get("value_family", "exponential")
    if family not in VALUE_FAMILIES:
        raise ConfigError("value_family", f"must be one of {VALUE_FAMILIES}, got {family!r}")
    bayes_mode = doc.get("bayes_mode", "lrt")
    if bayes_mode not in BAYES_MODES:
        raise ConfigError("bayes_mode", f"must be one of {BAYES_MODES}, got {bayes_mode!r}")

    solver_kw = {}
    if "solver" in doc:
        for k, v in _block(doc, "solver", _SOLVER_KEYS).items():
            field = f"solver.{k}"
            solver_kw[k] = _integer(v, field) if _SOLVER_KEYS[k] is int else _number(v, field)
            if solver_kw[k] <= 0:
                raise ConfigError(field, f"must be positive, got {v!r}")
    try:
        solver = SolverConfig(**solver_kw)
    except ValueError as exc:
        raise ConfigError("solver", str(exc)) from exc

    sim = None
    if "sim" in doc:
        block = _block(doc, "sim", _SIM_KEYS)
        for k in _SIM_KEYS:
            if k not in block:
                raise ConfigError(f"sim.{k}", "missing required key")
        trials = _integer(block["trials"], "sim.trials")
        if trials < 1:
            raise ConfigError("sim.trials", f"must be at least 1, got {trials}")
        seed = _integer(block["seed"], "sim.seed")
        if seed < 0:
            raise ConfigError("sim.seed", f"must be nonnegative, got {seed}")
        sim = SimSettings(trials, seed)

    scenario = Scenario(
        priors=Priors(pi0),
        profile=AgentProfile(alpha=alpha, c_star=c_star, value_family=family),
        costs=costs,
        model=GaussianShiftModel(shift),
    )
    return RunConfig(scenario=scenario, solver=solver, bayes_mode=bayes_mode, sim=sim)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON in {path}: {exc}") from exc
    return parse_config(doc)
