"""Command-line front end.

    ptdetect solve CONFIG
    ptdetect sweep CONFIG --param pi0 --from 0.05 --to 0.95 --steps 19
    ptdetect simulate CONFIG --rule bayes
    ptdetect roc CONFIG --points 101

Results go to stdout as CSV (12 significant digits, LF line endings);
diagnostics go to stderr.  Exit codes: 0 success, 2 configuration or usage
error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .detection import (
    AlwaysH0,
    AlwaysH1,
    DecisionRule,
    OperatingPoint,
    RandomizedThreshold,
    Threshold,
    bayes_rule,
    roc,
)
from .risk import bayes_risk, g_of_x, h_of_y
from .simulation import compare, simulate
from .solver import (
    SWEEP_PARAMS,
    SolveReport,
    SolverError,
    default_workers,
    solve,
    sweep,
    with_param,
)

log = logging.getLogger("ptdetect")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SCENARIO_COLUMNS = [
    "pi0", "shift", "alpha", "c_star", "c00", "c01", "c10", "c11", "value_family", "bayes_mode",
]
SOLVE_COLUMNS = SCENARIO_COLUMNS + [
    "attitude", "regime", "shape", "method", "x_star", "y_star", "f_star", "g_star", "h_star",
    "foc_residual", "bayes_x", "bayes_y", "bayes_risk_at_star", "bayes_risk_at_bayes", "grid_gap",
]
SWEEP_COLUMNS = ["param_value"] + SOLVE_COLUMNS
SIMULATE_COLUMNS = SCENARIO_COLUMNS + [
    "rule", "trials", "seed", "x_hat", "y_hat", "n00", "n01", "n10", "n11",
    "empirical_bayes_risk", "empirical_behavioral_risk", "ci_halfwidth_x", "ci_halfwidth_y",
    "x_analytic", "y_analytic", "bayes_risk_analytic", "behavioral_risk_analytic",
    "dev_x", "hw_x", "pass_x", "dev_y", "hw_y", "pass_y",
    "dev_bayes", "hw_bayes", "pass_bayes", "dev_behavioral", "hw_behavioral", "pass_behavioral",
    "all_pass",
]
ROC_COLUMNS = ["x", "y", "f", "g", "h", "bayes_risk"]


class UsageError(Exception):
    pass


def fmt(val) -> str:
    if val is None:
        return "NA"
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, str):
        return val
    v = float(val)
    if math.isnan(v):
        return "NA"
    if v == 0.0:
        v = 0.0  # no "-0"
    return format(v, ".12g")


def rule_label(rule: DecisionRule) -> str:
    if isinstance(rule, AlwaysH0):
        return "always0"
    if isinstance(rule, AlwaysH1):
        return "always1"
    if isinstance(rule, Threshold):
        return f"threshold={fmt(rule.tau)}"
    if isinstance(rule, RandomizedThreshold):
        return f"randomized={fmt(rule.tau)}/{fmt(rule.gamma)}"
    raise TypeError(rule)


def _write_csv(header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    sys.stdout.write(buf.getvalue())
    sys.stdout.flush()


def _scenario_fields(cfg: RunConfig, scenario=None) -> list:
    sc = scenario or cfg.scenario
    c = sc.costs
    return [
        sc.priors.pi0, sc.model.shift, sc.profile.alpha, sc.profile.c_star,
        c.c00, c.c01, c.c10, c.c11, sc.profile.value_family, cfg.bayes_mode,
    ]


def _solve_fields(cfg: RunConfig, report: SolveReport, scenario=None) -> list:
    sc = scenario or cfg.scenario
    base = report.bayes_baseline
    return _scenario_fields(cfg, sc) + [
        report.attitude.value,
        report.regime.value,
        report.shape.label.value,
        report.method.value,
        report.point.x,
        report.point.y,
        report.risk.f,
        report.risk.g,
        report.risk.h,
        report.foc_residual_at_solution,
        base.point.x if base else None,
        base.point.y if base else None,
        report.risk.bayes,
        base.risk.bayes if base else None,
        report.grid_gap,
    ]


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    if getattr(args, "paper_literal_bayes", False):
        cfg = replace(cfg, bayes_mode="paper-literal")
    return cfg


def cmd_solve(args) -> int:
    cfg = _load(args)
    report = solve(cfg.scenario, cfg.solver, cfg.bayes_mode)
    _write_csv(SOLVE_COLUMNS, [_solve_fields(cfg, report)])
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    if args.steps < 2:
        raise UsageError(f"--steps must be at least 2, got {args.steps}")
    if not args.start < args.stop:
        raise UsageError(f"--from must be smaller than --to, got {args.start} >= {args.stop}")
    try:
        results = sweep(cfg.scenario, args.param, args.start, args.stop, args.steps,
                        cfg.solver, cfg.bayes_mode, workers=default_workers())
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(args.param, str(exc)) from exc
    rows = []
    for val, report in results:
        sc = with_param(cfg.scenario, args.param, val)
        rows.append([val] + _solve_fields(cfg, report, sc))
    _write_csv(SWEEP_COLUMNS, rows)
    return EXIT_OK


def _parse_rule(text: str, cfg: RunConfig) -> DecisionRule:
    sc = cfg.scenario
    if text == "always0":
        return AlwaysH0()
    if text == "always1":
        return AlwaysH1()
    if text == "bayes":
        try:
            return bayes_rule(sc.priors, sc.costs, sc.model, mode=cfg.bayes_mode)
        except ValueError as exc:
            raise ConfigError("costs", str(exc)) from exc
    if text == "solved":
        return solve(sc, cfg.solver, cfg.bayes_mode).rule
    if text.startswith("threshold="):
        try:
            tau = float(text.split("=", 1)[1])
        except ValueError:
            raise UsageError(f"--rule threshold needs a number, got {text!r}") from None
        if not math.isfinite(tau):
            raise UsageError(f"--rule threshold must be finite, got {text!r}")
        return Threshold(tau)
    raise UsageError(f"--rule must be solved, bayes, always0, always1 or threshold=<tau>; got {text!r}")


def cmd_simulate(args) -> int:
    cfg = _load(args)
    if cfg.sim is None:
        raise ConfigError("sim", "simulate needs a 'sim' block with trials and seed")
    rule = _parse_rule(args.rule, cfg)
    sc = cfg.scenario
    rep = simulate(sc, rule, cfg.sim.trials, cfg.sim.seed, workers=default_workers())
    dev = compare(rep, sc, rule)
    counts = rep.joint_counts
    row = _scenario_fields(cfg) + [
        rule_label(rule), rep.trials, rep.seed, rep.x_hat, rep.y_hat,
        counts[0][0], counts[0][1], counts[1][0], counts[1][1],
        rep.empirical_bayes_risk, rep.empirical_behavioral_risk,
        rep.ci_halfwidth_x, rep.ci_halfwidth_y,
        dev.x.analytic, dev.y.analytic, dev.bayes_risk.analytic, dev.behavioral_risk.analytic,
    ]
    for d in dev:
        row += [d.deviation, d.halfwidth, d.passed]
    row.append(dev.all_passed)
    _write_csv(SIMULATE_COLUMNS, [row])
    return EXIT_OK


def cmd_roc(args) -> int:
    cfg = _load(args)
    if args.points < 2:
        raise UsageError(f"--points must be at least 2, got {args.points}")
    sc = cfg.scenario
    xs = np.linspace(0.0, 1.0, args.points)
    ys = np.asarray(roc(xs, sc.model))
    gs = np.asarray(g_of_x(xs, sc))
    hs = np.asarray(h_of_y(ys, sc))
    rows = []
    for x, y, g, h in zip(xs, ys, gs, hs):
        b = bayes_risk(OperatingPoint(float(x), float(y)), sc.priors, sc.costs)
        rows.append([x, y, g + h, g, h, b])
    _write_csv(ROC_COLUMNS, rows)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptdetect", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("config", help="scenario config (JSON)")
        p.add_argument("--paper-literal-bayes", action="store_true",
                       help="use pi0/pi1 directly as the threshold on r for the Bayes baseline")

    p = sub.add_parser("solve", help="optimal operating point for one scenario")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve along a parameter range")
    common(p)
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo check of a decision rule")
    common(p)
    p.add_argument("--rule", default="solved",
                   help="solved | bayes | always0 | always1 | threshold=<tau> (default: solved)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("roc", help="ROC and risk curves for plotting")
    common(p)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_roc)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"ptdetect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, ArithmeticError) as exc:
        print(f"ptdetect: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception as exc:  # anything else is still a failed computation, not a usage error
        log.debug("unexpected failure", exc_info=True)
        print(f"ptdetect: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
