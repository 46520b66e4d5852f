"""Command-line entry point.

Exit codes: 0 scalable / success, 1 not scalable, 2 error or inconclusive.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import experiments
from .auglag import AugLagOptions, write_trace_csv
from .barrier import BarrierOptions
from .exceptions import FrameScaleError, Inconclusive
from .frame import (ScalingWeights, condition_number, frame_bounds, gaussian_frame, load_frame,
                    save_frame)
from .plotting import render_r2_svg
from .programs import METHODS, CoefficientRule, Tolerances, is_scalable

EXIT_OK, EXIT_NOT_SCALABLE, EXIT_ERROR = 0, 1, 2


class _Fail(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _tols(args) -> Tolerances:
    return Tolerances(feas=args.tol_feas, zero=args.tol_zero)


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("frame", help="frame JSON file")
    p.add_argument("--method", choices=METHODS, default="lp")
    p.add_argument("--coef", choices=[r.value for r in CoefficientRule], default="ones")
    p.add_argument("--epsilon", type=float, default=1e-8, help="barrier shift")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--update-mode", choices=["classical", "paper-literal"], default="classical")
    p.add_argument("--trace", metavar="CSV", help="write the auglag iteration trace here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framescale",
                                     description="Decide and compute tight rescalings of finite frames.")
    parser.add_argument("--tol-feas", type=float, default=1e-9)
    parser.add_argument("--tol-zero", type=float, default=1e-8,
                        help="support threshold relative to max(u)")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="draw a Gaussian frame")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--unit-norm", action="store_true")
    g.add_argument("--out", required=True)

    c = sub.add_parser("check", help="decide scalability; prints a JSON report")
    _add_solver_flags(c)

    s = sub.add_parser("scale", help="write scaling weights for a scalable frame")
    _add_solver_flags(s)
    s.add_argument("--out", required=True, help="weights JSON file")

    e = sub.add_parser("exp", help="Monte Carlo experiments")
    esub = e.add_subparsers(dest="experiment", required=True)
    sp = esub.add_parser("sparsity")
    sp.add_argument("--n", type=_int_list, required=True)
    sp.add_argument("--m", type=_int_list, required=True)
    sp.add_argument("--min-scalable", type=int, default=experiments.MIN_SCALABLE)
    pp = esub.add_parser("proportion")
    pp.add_argument("--n", type=_int_list, required=True)
    pp.add_argument("--stride", type=int, default=None)
    for p in (sp, pp):
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        p.add_argument("--method", choices=METHODS, default="lp")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out", help="CSV path (stdout when omitted)")

    pl = sub.add_parser("plot", help="figures")
    plsub = pl.add_subparsers(dest="figure", required=True)
    r2 = plsub.add_parser("r2")
    r2.add_argument("frame")
    r2.add_argument("--weights")
    r2.add_argument("--out", required=True)
    return parser


def _solve(args):
    f = load_frame(args.frame)
    barrier = BarrierOptions(epsilon=args.epsilon,
                             **({"max_iters": args.max_iters} if args.max_iters else {}))
    auglag = AugLagOptions(update_mode=args.update_mode, record_trace=bool(args.trace),
                           **({"max_iters": args.max_iters} if args.max_iters else {}))
    try:
        report = is_scalable(f, args.method, CoefficientRule(args.coef), _tols(args),
                             barrier_options=barrier, auglag_options=auglag)
    except Inconclusive as exc:
        if args.trace and exc.report is not None and "trace" in exc.report.details:
            write_trace_csv(exc.report.details["trace"], args.trace)
        raise
    if args.trace and "trace" in report.details:
        write_trace_csv(report.details.pop("trace"), args.trace)
    return f, report


def cmd_gen(args) -> int:
    f = gaussian_frame(args.n, args.m, args.seed, unit_norm=args.unit_norm)
    save_frame(f, args.out)
    lower, upper = frame_bounds(f)
    print(f"wrote {args.out}")
    print(f"frame bounds: A={lower:.17g} B={upper:.17g}")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        _, report = _solve(args)
    except Inconclusive as exc:
        print(json.dumps(_jsonable(exc.report.to_dict() if exc.report else
                                   {"status": "inconclusive"}), indent=2))
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report.details.pop("trace", None)
    print(json.dumps(_jsonable(report.to_dict()), indent=2))
    return EXIT_OK if report.scalable else EXIT_NOT_SCALABLE


def cmd_scale(args) -> int:
    f, report = _solve(args)
    if not report.scalable:
        print("frame is not scalable", file=sys.stderr)
        return EXIT_NOT_SCALABLE
    Path(args.out).write_text(json.dumps(_jsonable(report.weights_document()), indent=2) + "\n")
    print(f"cond_before={condition_number(f):.17g}")
    print(f"cond_after={report.cond_after:.17g}")
    return EXIT_OK


def cmd_exp(args) -> int:
    tols = _tols(args)
    if args.experiment == "sparsity":
        cells = experiments.sparsity_experiment(
            args.n, args.m, args.trials, args.seed, args.method, tols,
            min_scalable=args.min_scalable, n_jobs=args.jobs)
        text = experiments.sparsity_csv(cells)
    else:
        points = experiments.proportion_experiment(
            args.n, args.trials, args.seed, args.method, tols, args.stride, n_jobs=args.jobs)
        text = experiments.proportion_csv(points)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_plot(args) -> int:
    f = load_frame(args.frame)
    if f.n != 2:
        raise _Fail(f"plot r2 needs a frame in R^2, got n={f.n}")
    w = None
    if args.weights:
        doc = json.loads(Path(args.weights).read_text())
        w = ScalingWeights.from_vector(doc["u"], args.tol_zero)
    data = experiments.r2_figure_data(f, w)
    Path(args.out).write_text(render_r2_svg(data))
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "check": cmd_check, "scale": cmd_scale, "exp": cmd_exp,
            "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
    except (FrameScaleError, _Fail, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
