"""``triada`` command line: run, sweep and roundtrip."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import datagen
from .kernels import (
    GemtProblem,
    gemt_elementwise,
    gemt_staged_inner,
    gemt_staged_outer,
    parse_order,
    rel_max_err,
)
from .sim import load
from .tensor_core import Shape3, Tensor3, kind_of, tensor_read, tensor_write
from .transforms import TransformKind, custom_coeff, inverse_coeff, make_coeff, read_coeff

ENGINES = ("elementwise", "inner", "outer", "simulate")
RUN_SCHEMA = "triada-run/v1"


class CliError(Exception):
    pass


def _common(p: argparse.ArgumentParser, shape_required: bool = False) -> None:
    p.add_argument("--kind", default="dht", choices=[k.value for k in TransformKind])
    p.add_argument("--normalization", default="unnormalized",
                   choices=("unnormalized", "orthonormal"))
    p.add_argument("--shape", type=Shape3.parse, required=shape_required)
    p.add_argument("--dtype", default="real64", choices=("real64", "complex128", "int64"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    for s in (1, 2, 3):
        p.add_argument(f"--custom-c{s}", metavar="PATH",
                       help=f"matrix file for mode {s} (tensor format with n2 = 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triada", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one engine on one problem")
    _common(run)
    run.add_argument("--engine", default="simulate", choices=ENGINES)
    run.add_argument("--direction", default="forward", choices=("forward", "inverse"))
    run.add_argument("--order", default="312", help="summation order for --engine inner")
    run.add_argument("--sparsity", type=float, default=0.0)
    run.add_argument("--input", metavar="PATH")
    run.add_argument("--output", metavar="PATH")
    run.add_argument("--report", metavar="PATH")
    run.add_argument("--zero-epsilon", type=float, default=0.0)
    run.add_argument("--verify", action="store_true")
    run.add_argument("--tolerance", type=float, default=1e-12)

    sweep = sub.add_parser("sweep", help="simulate one problem at several sparsities")
    _common(sweep, shape_required=True)
    sweep.add_argument("--sparsities", default="0,0.5,0.9,1")
    sweep.add_argument("--csv", metavar="PATH")
    sweep.add_argument("--zero-epsilon", type=float, default=0.0)

    rt = sub.add_parser("roundtrip", help="forward then inverse on the simulator")
    _common(rt, shape_required=True)
    rt.add_argument("--tolerance", type=float, default=1e-9)
    return parser


def _matrices(args, shape, random_mats):
    mats = []
    for s, n in zip((1, 2, 3), shape):
        path = getattr(args, f"custom_c{s}")
        if path:
            mats.append(read_coeff(path))
        elif args.kind == "custom":
            if random_mats is None:
                raise CliError("--kind custom needs --custom-cN files or generated data")
            mats.append(custom_coeff(random_mats[s - 1]))
        else:
            mats.append(make_coeff(args.kind, n, args.normalization))
    return mats


def _problem_data(args, sparsity=0.0):
    if getattr(args, "input", None):
        X = tensor_read(args.input).data
        _, mats = datagen.random_problem(X.shape, kind_of(X.dtype), args.seed, 0.0,
                                         custom_matrices=args.kind == "custom")
        return X, mats
    if args.shape is None:
        raise CliError("either --shape or --input is required")
    return datagen.random_problem(args.shape.as_tuple(), args.dtype, args.seed, sparsity,
                                  custom_matrices=args.kind == "custom")


def cmd_run(args) -> int:
    if not 0.0 <= args.sparsity <= 1.0:
        raise CliError("--sparsity must lie in [0, 1]")
    X, rand = _problem_data(args, args.sparsity)
    mats = _matrices(args, X.shape, rand)
    report: dict = {"schema": RUN_SCHEMA, "engine": args.engine, "kind": args.kind,
                    "normalization": args.normalization, "direction": args.direction,
                    "shape": list(X.shape), "seed": args.seed, "sparsity": args.sparsity}
    if args.engine == "simulate":
        if args.direction == "inverse":
            mats = [inverse_coeff(c) for c in mats]
        machine = load(None, X, *mats, zero_epsilon=args.zero_epsilon, workers=args.workers)
        Y, sim = machine.run_transform()
        out = Y.data
        report["simulation"] = sim.to_dict()
        report["macs"] = sim.macs_executed
        problem = GemtProblem(X, *mats)
    else:
        problem = GemtProblem(X, *mats, direction=args.direction)
        if args.engine == "elementwise":
            res = gemt_elementwise(problem)
        elif args.engine == "inner":
            res = gemt_staged_inner(problem, parse_order(args.order))
            report["order"] = "".join(map(str, parse_order(args.order)))
        else:
            res = gemt_staged_outer(problem)
        out = res.out
        report["macs"] = res.macs
        report["stage_macs"] = list(res.stage_macs)
    status = 0
    if args.verify:
        ref = gemt_elementwise(problem).out
        tol = 0.0 if problem.kind == "int64" else args.tolerance
        abs_err = float(np.max(np.abs(out - ref))) if out.size else 0.0
        rel = rel_max_err(out, ref)
        ok = rel <= tol
        report["verification"] = {"max_abs_err": abs_err, "max_rel_err": rel,
                                  "tolerance": tol, "passed": ok}
        if not ok:
            print(f"verification failed: relative error {rel:.3e} > {tol:.1e}", file=sys.stderr)
            status = 1
    if args.output:
        tensor_write(args.output, Tensor3(out))
    text = json.dumps(report, indent=2) + "\n"
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


SWEEP_HEADER = ("sparsity", "macs_executed", "macs_skipped", "steps", "weighted_cost")


def sweep_rows(args) -> list[tuple]:
    levels = [float(s) for s in args.sparsities.split(",") if s.strip()]
    rows = []
    for p in levels:
        X, rand = _problem_data(args, p)
        mats = _matrices(args, X.shape, rand)
        _, rep = load(None, X, *mats, zero_epsilon=args.zero_epsilon,
                      workers=args.workers).run_transform()
        t = rep.totals
        rows.append((p, t["macs_executed"], t["macs_skipped"], t["time_steps"],
                     rep.weighted_cost))
    return rows


def cmd_sweep(args) -> int:
    rows = sweep_rows(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    ordered = sorted(rows)
    mono = all(a[1] >= b[1] for a, b in zip(ordered, ordered[1:]))
    print(f"macs_executed non-increasing in sparsity: {'yes' if mono else 'no'}",
          file=sys.stderr)
    return 0


def cmd_roundtrip(args) -> int:
    X, rand = _problem_data(args)
    # integer Hadamard data round-trips exactly through H (H X) = N X
    exact = args.dtype == "int64" and args.kind == "dwht"
    if exact:
        mats = inv = [make_coeff("dwht", n) for n in X.shape]
    else:
        if args.kind != "custom":
            args.normalization = "orthonormal"
        mats = _matrices(args, X.shape, rand)
        inv = [inverse_coeff(c) for c in mats]
    Y, _ = load(None, X, *mats, workers=args.workers).run_transform()
    Z, _ = load(None, Y.data, *inv, workers=args.workers).run_transform()
    back = Z.data
    if exact:
        n_total = int(np.prod(X.shape))
        if np.any(back % n_total):
            print("round trip not divisible by the Gram scale", file=sys.stderr)
            return 1
        back = back // n_total
    err = float(np.max(np.abs(back - X)))
    ok = err == 0 if exact else err <= args.tolerance
    print(json.dumps({"kind": args.kind, "shape": list(X.shape), "max_abs_err": err,
                      "exact": exact, "passed": ok}))
    return 0 if ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "sweep": cmd_sweep, "roundtrip": cmd_roundtrip}[args.command]
    try:
        return handler(args)
    except (CliError, ValueError, OSError, OverflowError) as exc:
        print(f"triada {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
