"""Command-line front end.

Config files are flat ``key = value`` text with ``#`` comments::

    mu_e = 0
    var_e = 6.25
    mu_d = 0
    var_d = 0.25
    noise_var = 0.25
    constraint = soft        # or: hard
    constraint_value = 1.5   # lambda (soft) or P-bar (hard)

Exit codes: 0 success, 2 bad config or arguments, 3 solver error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import cheap_talk, nash, nonlinear, robustness, stackelberg
from .core import GameParams, GaussianPrior, Hard, SignalingGameError, Soft

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3

CONFIG_KEYS = ("mu_e", "var_e", "mu_d", "var_d", "noise_var", "constraint", "constraint_value")
SOLVERS = ("stackelberg-soft", "stackelberg-hard", "nash-soft", "nash-hard", "cheap-talk")
SWEEP_PARAMS = ("sigma_d2", "sigma_e2", "lambda", "p_bar", "noise_var", "mu_gap")
SWEEP_HEADER = ["param", "value", "stackelberg_kind", "stackelberg_cost_e", "stackelberg_cost_d",
                "nash_cost_e", "nash_cost_d"]
ROBUSTNESS_HEADER = ["epsilon", "w2", "cost_e", "team_cost", "gap"]


class ConfigError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def parse_config(text: str, source: str = "<config>") -> GameParams:
    values: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r} (first on line {values[key][1]})")
        values[key] = (value, lineno)

    missing = [k for k in CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing key(s): {', '.join(missing)}")

    nums = {}
    for key in CONFIG_KEYS:
        if key == "constraint":
            continue
        value, lineno = values[key]
        try:
            nums[key] = float(value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} must be a number, got {value!r}") from None
        if not math.isfinite(nums[key]):
            raise ConfigError(f"{source}:{lineno}: {key} must be finite")

    for key in ("var_e", "var_d", "noise_var"):
        if nums[key] <= 0:
            raise ConfigError(f"{source}:{values[key][1]}: {key} must be > 0, got {values[key][0]}")

    mode, lineno = values["constraint"]
    cv, cv_line = nums["constraint_value"], values["constraint_value"][1]
    if mode == "soft":
        if cv < 0:
            raise ConfigError(f"{source}:{cv_line}: soft constraint_value (lambda) must be >= 0")
        constraint = Soft(cv)
    elif mode == "hard":
        if cv <= 0:
            raise ConfigError(f"{source}:{cv_line}: hard constraint_value (P-bar) must be > 0")
        constraint = Hard(cv)
    else:
        raise ConfigError(f"{source}:{lineno}: constraint must be 'soft' or 'hard', got {mode!r}")

    return GameParams(
        prior_e=GaussianPrior(nums["mu_e"], nums["var_e"]),
        prior_d=GaussianPrior(nums["mu_d"], nums["var_d"]),
        noise_variance=nums["noise_var"],
        constraint=constraint,
    )


def load_config(path: str) -> GameParams:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return parse_config(text, path)


def params_to_dict(params: GameParams) -> dict:
    mode = "soft" if isinstance(params.constraint, Soft) else "hard"
    value = params.constraint.lam if mode == "soft" else params.constraint.p_bar
    return {
        "mu_e": params.prior_e.mean, "var_e": params.prior_e.variance,
        "mu_d": params.prior_d.mean, "var_d": params.prior_d.variance,
        "noise_var": params.noise_variance, "constraint": mode, "constraint_value": value,
    }


def run_solver(params: GameParams, solver: str) -> dict:
    out: dict = {"solver": solver, "params": params_to_dict(params)}
    if solver == "stackelberg-soft":
        _, diag = stackelberg.classify_soft(params)
        out["result"] = stackelberg.solve_soft(params).to_dict()
        out["diagnostics"] = diag.to_dict()
    elif solver == "stackelberg-hard":
        out["result"] = stackelberg.solve_hard(params).to_dict()
    elif solver == "nash-soft":
        out["result"] = nash.solve_soft(params).to_dict()
    elif solver == "nash-hard":
        sol = nash.solve_hard(params)
        out["result"] = sol.equilibrium.to_dict()
        out["diagnostics"] = {"kkt_multiplier": sol.kkt_multiplier}
    elif solver == "cheap-talk":
        out["fully_informative"] = cheap_talk.fully_informative_result(params.prior_e, params.prior_d).to_dict()
        out["babbling"] = cheap_talk.babbling_result(params.prior_e, params.prior_d).to_dict()
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return out


def _with_param(params: GameParams, name: str, value: float) -> GameParams:
    if name == "sigma_d2":
        return replace(params, prior_d=GaussianPrior(params.prior_d.mean, value))
    if name == "sigma_e2":
        return replace(params, prior_e=GaussianPrior(params.prior_e.mean, value))
    if name == "lambda":
        return replace(params, constraint=Soft(value))
    if name == "p_bar":
        return replace(params, constraint=Hard(value))
    if name == "noise_var":
        return replace(params, noise_variance=value)
    if name == "mu_gap":
        return replace(params, prior_e=GaussianPrior(params.prior_d.mean + value, params.prior_e.variance))
    raise ValueError(f"unknown sweep parameter {name!r}")


def sweep_rows(params: GameParams, name: str, lo: float, hi: float, steps: int) -> list[list[str]]:
    """Rows of the sweep CSV (without header), one per linearly spaced value."""
    rows = []
    for value in np.linspace(lo, hi, steps):
        value = float(value)
        p = _with_param(params, name, value)
        if isinstance(p.constraint, Soft):
            st = stackelberg.solve_soft(p)
            ne, nd = nash.nash_soft_costs(p)
        else:
            st = stackelberg.solve_hard(p)
            ne, nd = nash.nash_hard_costs(p)
        rows.append([name, _fmt(value), st.kind.value, _fmt(st.cost_e), _fmt(st.cost_d), _fmt(ne), _fmt(nd)])
    return rows


def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if path == "-":
        sys.stdout.write(buf.getvalue())
        return
    try:
        Path(path).write_text(buf.getvalue())
    except OSError as exc:
        raise ConfigError(f"{path}: cannot write output ({exc.strerror})") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_solve(args) -> int:
    params = load_config(args.config)
    print(json.dumps(run_solver(params, args.solver), indent=2))
    return EXIT_OK


def cmd_compare(args) -> int:
    params = load_config(args.config)
    level = args.level
    if level is None:
        if not isinstance(params.constraint, Hard):
            raise ConfigError("--level is required for a soft-constrained game")
        level = math.sqrt(params.constraint.p_bar)
    if not level > 0:
        raise ConfigError(f"--level must be > 0, got {level}")
    comp = nonlinear.compare_quantizer_vs_affine(params, nonlinear.QuantizerEncoder(level))
    out = {"params": params_to_dict(params), "level": level,
           "affine": comp.affine_cost, "quantizer": comp.quantizer_cost,
           "quantizer_wins": comp.quantizer_wins}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    params = load_config(args.config)
    if not args.lo < args.hi:
        raise ConfigError(f"--from must be below --to, got {args.lo} >= {args.hi}")
    if args.steps < 2:
        raise ConfigError(f"--steps must be >= 2, got {args.steps}")
    if args.param == "lambda" and not isinstance(params.constraint, Soft):
        raise ConfigError("sweeping lambda needs a soft-constrained config")
    if args.param == "p_bar" and not isinstance(params.constraint, Hard):
        raise ConfigError("sweeping p_bar needs a hard-constrained config")
    positive = {"sigma_d2", "sigma_e2", "noise_var", "p_bar"}
    if (args.param in positive and args.lo <= 0) or (args.param == "lambda" and args.lo < 0):
        raise ConfigError(f"--from {args.lo} is out of range for {args.param}")
    _write_csv(args.out, SWEEP_HEADER, sweep_rows(params, args.param, args.lo, args.hi, args.steps))
    return EXIT_OK


def cmd_robustness(args) -> int:
    params = load_config(args.config)
    if len(args.direction) != 2:
        raise ConfigError("--direction takes exactly two numbers: d_mean,d_sigma")
    try:
        sweep = robustness.PerturbationSweep(params, args.direction[0], args.direction[1],
                                             tuple(args.eps_list), args.which)
    except ValueError as exc:
        raise ConfigError(f"bad sweep: {exc}") from None
    rows = [[_fmt(r.epsilon), _fmt(r.w2), _fmt(r.stackelberg_cost_e), _fmt(r.team_cost), _fmt(r.gap_to_team)]
            for r in robustness.run_sweep(sweep)]
    _write_csv(args.out, ROBUSTNESS_HEADER, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signaling-games",
                                     description="Equilibria of Gaussian signaling games with mismatched priors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve for an equilibrium and print JSON")
    p.add_argument("config")
    p.add_argument("--solver", choices=SOLVERS, required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="sign quantizer vs best affine Stackelberg policy")
    p.add_argument("config")
    p.add_argument("--level", type=float, default=None,
                   help="quantizer output level (default sqrt(P-bar) for hard configs)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="Stackelberg and Nash costs along one parameter (CSV)")
    p.add_argument("config")
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("robustness", help="prior-perturbation sweep around the team setup (CSV)")
    p.add_argument("config")
    p.add_argument("--direction", type=_float_list, default=[1.0, 0.0], help="d_mean,d_sigma")
    p.add_argument("--which", choices=[w.value for w in robustness.Which], default="encoder")
    p.add_argument("--eps-list", type=_float_list, default=[1e-1, 1e-2, 1e-3, 1e-4])
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_robustness)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SignalingGameError as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
