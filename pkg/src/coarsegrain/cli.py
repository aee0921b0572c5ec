"""Command-line harness.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager

import numpy as np

from . import _kernels, analytic, riverswim, smoothness, theory
from .agents import optimistic, zoom
from .errors import CoarseGrainError
from .metric import MetricSpace

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _fmt(x):
    return f"{float(x):.12g}"


def _floats(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc
    return vals


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _make_function(args):
    if args.function == "sine":
        return analytic.SineRamp(args.A, args.omega, args.m)
    return analytic.Stairs(args.A, args.w)


def _env(args, noise=None):
    data = dict(args.env or {})
    if noise is not None and "noise_sigma" not in data:
        data["noise_sigma"] = noise
    return riverswim.RiverswimConfig(**data)


# ------------------------------------------------------------------ commands


def cmd_profile(args):
    if not args.alphas:
        raise _Usage("--alphas must list at least one value")
    f = _make_function(args)
    lo, hi = args.domain
    grid = np.arange(lo, hi + 0.5 * args.grid_step, args.grid_step)
    samples = smoothness.SampleSet.from_function(MetricSpace.interval(lo, hi), f, grid)
    emp, *_ = _kernels.pair_max_slope_multi(samples.points, samples.values, args.alphas)
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(["alpha", "L_alpha_analytic", "L_alpha_empirical"])
        for a, (_, la), e in zip(args.alphas, analytic.l_alpha_curve(f, args.alphas), emp):
            w.writerow([_fmt(a), _fmt(la), _fmt(e) if e >= 0 else "nan"])
    return EXIT_OK


def cmd_envelope(args):
    samples = smoothness.read_samples_csv(args.samples)
    if samples.space.D != 1:
        raise _Usage("envelope queries are on a 1-D grid; samples must be 1-D")
    lo = args.query_lo if args.query_lo is not None else samples.space.lower[0]
    hi = args.query_hi if args.query_hi is not None else samples.space.upper[0]
    q = np.linspace(lo, hi, args.query_n)
    m = args.method
    if m == "lipschitz":
        if args.L is None:
            raise _Usage("method lipschitz needs --L")
        env = smoothness.lipschitz_envelope(samples, args.L, q)
    elif m in ("lalpha", "relaxed"):
        if args.alpha is None or args.L_alpha is None:
            raise _Usage(f"method {m} needs --alpha and --L-alpha")
        fn = smoothness.l_alpha_envelope if m == "lalpha" else smoothness.relaxed_envelope
        env = fn(samples, args.alpha, args.L_alpha, q)
    else:
        if args.profile is None:
            raise _Usage("method multi needs --profile")
        with open(args.profile) as fh:
            prof = smoothness.SmoothnessProfile.from_json(fh.read())
        env = smoothness.multi_alpha_envelope(samples, prof, q)
    truth = _make_function(args)(q) if args.function else None
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(["x", "f_true", "lower", "upper"] if truth is not None else ["x", "lower", "upper"])
        for i, x in enumerate(q):
            row = [_fmt(x)] + ([_fmt(truth[i])] if truth is not None else []) + [_fmt(env.lower[i]), _fmt(env.upper[i])]
            w.writerow(row)
    return EXIT_OK


def cmd_riverswim(args):
    cfg = _env(args)
    s = np.linspace(-1.0, 1.0, args.states + 2)[1:-1]
    det = riverswim.RiverswimConfig(cfg.a_max, cfg.c, cfg.r_left, cfg.r_right, cfg.gamma, 0.0, cfg.s0)
    v = riverswim.v_star(det, s)
    with _output(args.out) as fh:
        w = _writer(fh)
        if args.mode == "exact":
            w.writerow(["s", "v_star"])
            for si, vi in zip(s, v):
                w.writerow([_fmt(si), _fmt(vi)])
            return EXIT_OK
        rng = np.random.default_rng(args.seed)
        est = riverswim.mc_value_estimate(cfg, s, args.rollouts, args.horizon, rng)
        w.writerow(["s", "v_star", "mc_mean", "mc_stderr"])
        for si, vi, mi, ei in zip(s, v, est.mean, est.stderr):
            w.writerow([_fmt(si), _fmt(vi), _fmt(mi), _fmt(ei)])
    return EXIT_OK


def cmd_sweep(args):
    env = _env(args) if args.env else optimistic.sweep_environment()
    cfg = optimistic.OptimisticAgentConfig(
        L_replacement=1.0, action_grid=args.action_grid, episodes=args.episodes,
        max_steps=args.max_steps, q_cap=max(args.q_cap, env.r_right), gamma=env.gamma, seed=args.seed,
    )
    rows = optimistic.sweep_replacement_L(args.values, args.seeds, env, cfg)
    with _output(args.out) as fh:
        optimistic.write_sweep_csv(rows, fh)
    return EXIT_OK


def cmd_zoom(args):
    env = _env(args)
    modes = [m.value for m in zoom.IndexMode] if args.mode == "all" else [args.mode]
    rows = []
    for mode in modes:
        zcfg = zoom.ZoomConfig(mode, args.L, args.alpha, args.L_alpha, args.episodes, args.horizon, args.action_grid)
        rows += zoom.run_zoom(zcfg, env, args.seed)
    with _output(args.out) as fh:
        zoom.write_zoom_csv(rows, fh)
    return EXIT_OK


def cmd_verify(args):
    if args.suite != "all" and args.suite not in theory.SUITES:
        raise _Usage(f"unknown suite {args.suite!r}")
    rng = np.random.default_rng(args.seed)
    cfg = _env(args)
    reports = theory.run_suite(args.suite, rng, args.corrupt_bound, cfg, quick=args.quick)
    with _output(args.out) as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ------------------------------------------------------------------ parser


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    p.add_argument("--out", default=argparse.SUPPRESS, help="output path (default stdout)")
    p.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of option defaults")
    return p


def _function_args(p, required):
    p.add_argument("--function", choices=["sine", "stairs"], required=required)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--omega", type=float, default=2.0)
    p.add_argument("--m", type=float, default=5.0)
    p.add_argument("--w", type=float, default=0.1)


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="coarsegrain", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None)
    parser.add_argument("--config", default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", parents=[common], help="alpha vs L_alpha table")
    _function_args(p, required=True)
    p.add_argument("--alphas", type=_floats, required=True)
    p.add_argument("--grid-step", type=float, default=1e-3)
    p.add_argument("--domain", type=_floats, default=None, help="lo,hi of the sampled interval")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("envelope", parents=[common], help="bound envelope on a query grid")
    p.add_argument("--samples", required=True, help="CSV with header x_0,f")
    p.add_argument("--method", choices=["lipschitz", "lalpha", "multi", "relaxed"], required=True)
    p.add_argument("--L", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--L-alpha", dest="L_alpha", type=float)
    p.add_argument("--profile", help="SmoothnessProfile JSON file")
    p.add_argument("--query-lo", type=float)
    p.add_argument("--query-hi", type=float)
    p.add_argument("--query-n", type=int, default=201)
    _function_args(p, required=False)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("riverswim", parents=[common], help="value curves")
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--states", type=int, default=400)
    p.add_argument("--rollouts", type=int, default=10_000)
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_riverswim)

    p = sub.add_parser("sweep", parents=[common], help="replacement-L sweep of the optimistic agent")
    p.add_argument("--values", type=_floats, default=list(optimistic.SWEEP_VALUES))
    p.add_argument("--seeds", type=int, default=30)
    p.add_argument("--episodes", type=int, default=50)
    p.add_argument("--max-steps", type=int, default=50)
    p.add_argument("--action-grid", type=int, default=21)
    p.add_argument("--q-cap", type=float, default=1.0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("zoom", parents=[common], help="ball-tree agent run")
    p.add_argument("--mode", choices=["lipschitz", "l_alpha", "combined", "all"], default="all")
    p.add_argument("--L", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=1.0 / 24.0)
    p.add_argument("--L-alpha", dest="L_alpha", type=float, default=1.0)
    p.add_argument("--episodes", type=int, default=16)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--action-grid", type=int, default=21)
    p.set_defaults(func=cmd_zoom)

    p = sub.add_parser("verify", parents=[common], help="run numerical bound checks")
    p.add_argument("suite", nargs="?", default="all", help="all|" + "|".join(theory.SUITES))
    p.add_argument("--quick", action="store_true", help="smaller trial counts")
    p.add_argument("--corrupt-bound", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def _apply_config(parser, argv, args):
    """Re-parse with JSON values as defaults; an ``env`` key holds riverswim fields."""
    with open(args.config) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise _Usage("config must be a JSON object")
    env = data.pop("env", None)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    bad = [k for k in data if k.replace("-", "_") not in known]
    if bad:
        raise _Usage(f"unknown config keys for {args.command}: {bad}")
    sub.set_defaults(**{k.replace("-", "_"): v for k, v in data.items()})
    args = parser.parse_args(argv)
    args.env = env
    return args


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.env = None
        if args.config:
            args = _apply_config(parser, argv, args)
        if getattr(args, "domain", "x") is None:
            args.domain = [0.0, 3.0] if args.function == "sine" else [0.0, 1.5]
        if getattr(args, "function", None) and args.A is None:
            args.A = 3.0 if args.function == "sine" else 0.1
        if args.env is not None and not isinstance(args.env, dict):
            raise _Usage("config key env must be an object")
        return args.func(args)
    except (_Usage, CoarseGrainError, OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
