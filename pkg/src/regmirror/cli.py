"""Command-line interface.

Subcommands:
  run        train the configured grid and write a metrics CSV
  summarize  reduce a metrics CSV to final accuracies per grid cell
  oracle     solve a seeded linear instance with the ground-truth solvers
  bench      time the compiled mirror-step kernels against the numpy fallback
"""

import argparse
import sys
import time

import numpy as np

from . import kernels
from .errors import RegmirrorError
from .harness import load_config, run_experiment, summarize
from .numerics import rng_stream
from .oracle import (InterpolationProblem, RegularizedProblem, min_norm_l2,
                     min_potential_dual, regularized_objective,
                     regularized_reference, ridge_closed_form)
from .potentials import SquaredL2, parse_potential

_OVERRIDES = {
    "lambda": "lambdas",
    "eta": "etas",
    "potential": "potential",
    "algorithm": "algorithms",
    "corruption": "corruption",
    "seed": "seed",
    "batch_size": "batch_size",
    "epochs": "epochs",
    "stop_window": "stop_window",
    "stop_tol": "stop_tol",
    "out": "out",
}


def _build_parser():
    parser = argparse.ArgumentParser(prog="regmirror")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment grid from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--force", action="store_true",
                       help="overwrite an existing output CSV")
    for flag in _OVERRIDES:
        p_run.add_argument(f"--{flag.replace('_', '-')}", dest=f"ov_{flag}")

    p_sum = sub.add_parser("summarize", help="summarize a metrics CSV")
    p_sum.add_argument("csv")
    p_sum.add_argument("--out", help="write the summary CSV here instead of stdout")

    p_or = sub.add_parser("oracle", help="solve a seeded linear instance exactly")
    p_or.add_argument("--kind", choices=("minnorm", "dual", "ridge", "reference"),
                      default="minnorm")
    p_or.add_argument("--n", type=int, default=10)
    p_or.add_argument("--p", type=int, default=30)
    p_or.add_argument("--seed", type=int, default=0)
    p_or.add_argument("--potential", default="l2")
    p_or.add_argument("--lambda", dest="lam", type=float, default=1.0)

    p_bench = sub.add_parser("bench", help="compare kernel backends")
    p_bench.add_argument("--sizes", default="1000,10000,100000")
    p_bench.add_argument("--repeats", type=int, default=200)
    return parser


def _cmd_run(args):
    overrides = {}
    for flag, key in _OVERRIDES.items():
        value = getattr(args, f"ov_{flag}")
        if value is not None:
            overrides[key] = value
    cfg = load_config(args.config, overrides)
    run_experiment(cfg, force=args.force)
    print(f"wrote {cfg.out}")


def _cmd_summarize(args):
    text = summarize(args.csv, out=args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def _cmd_oracle(args):
    rng = rng_stream(args.seed)
    x = rng.standard_normal((args.n, args.p))
    y = rng.standard_normal(args.n)
    problem = InterpolationProblem(x, y)
    potential = parse_potential(args.potential)
    if args.kind == "minnorm":
        w = min_norm_l2(problem)
    elif args.kind == "dual":
        w = min_potential_dual(problem, potential)
    else:
        rp = RegularizedProblem(problem, args.lam, potential)
        if args.kind == "ridge":
            if not isinstance(potential, SquaredL2):
                raise RegmirrorError("ridge closed form requires --potential l2")
            w = ridge_closed_form(rp)
        else:
            w = regularized_reference(rp)
        print(f"objective = {regularized_objective(rp, w):.12g}")
    print(f"max |Xw - y| = {float(np.max(np.abs(x @ w - y))):.3e}")
    print("w =", np.array2string(w, precision=6, max_line_width=100))


def _time_kernel(fn, w, g, repeats):
    best = float("inf")
    for _ in range(repeats):
        buf = w.copy()
        start = time.perf_counter()
        fn(buf)
        best = min(best, time.perf_counter() - start)
    return best


def _cmd_bench(args):
    backends = {"python": kernels.load_backend("python")}
    try:
        backends["cython"] = kernels.load_backend("cython")
    except ImportError:
        print("compiled kernels unavailable; timing the fallback only")
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<10} {'size':>8} " +
          " ".join(f"{name + ' (us)':>14}" for name in backends) +
          ("  speedup" if len(backends) == 2 else ""))
    rng = rng_stream(0)
    for size in (int(s) for s in args.sizes.split(",")):
        w = rng.standard_normal(size)
        g = rng.standard_normal(size)
        wpos = np.abs(w) + 0.1
        cases = {
            "l2": lambda mod, buf: mod.l2_step(buf, g, -0.01),
            "qnorm(3)": lambda mod, buf: mod.qnorm_step(buf, g, -0.01, 3.0),
            "entropy": lambda mod, buf: mod.entropy_step(buf, g, -0.01),
        }
        for name, call in cases.items():
            base = wpos if name == "entropy" else w
            times = [
                _time_kernel(lambda buf, m=mod: call(m, buf), base, g, args.repeats)
                for mod in backends.values()
            ]
            line = f"{name:<10} {size:>8} " + " ".join(f"{t * 1e6:>14.2f}" for t in times)
            if len(times) == 2:
                line += f"  {times[0] / times[1]:>6.2f}x"
            print(line)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        {"run": _cmd_run, "summarize": _cmd_summarize,
         "oracle": _cmd_oracle, "bench": _cmd_bench}[args.command](args)
    except RegmirrorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
