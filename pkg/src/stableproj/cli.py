"""Command-line interface: ``stableproj {g,density,convert,check}``.

Data goes to standard output (CSV or JSON), diagnostics to standard error.

Exit codes: 0 success, 1 failed check, 2 usage or parse error,
3 numerical non-convergence, 4 degenerate measure.

CSV columns
-----------
``g``:       ``v,value,err_est,method`` and, with ``--oracle``, ``oracle,abs_diff``.
``density``: ``x1,...,xd,value,err_est,route``.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from .checks import SUITES, run_suite
from .density import (
    ROUTES,
    RULE_KINDS,
    DensityRequest,
    default_sphere_rule,
    density_at,
    lattice,
    make_sphere_rule,
)
from .errors import ConvergenceError, DegenerateMeasureError, DomainError, QuadratureError
from .io import MeasureFormatError, dumps_measure, load_measure, write_csv
from .kernel import METHOD_NAMES
from .projection import REPRESENTATIONS, g_direct_many, g_eval_many
from .quad import ToleranceSpec
from .spectral import convert_measure

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NONCONV, EXIT_DEGENERATE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _tolerance(rel: float) -> ToleranceSpec:
    if not (rel > 0 and math.isfinite(rel)):
        raise UsageError(f"--tol must be positive, got {rel}")
    return ToleranceSpec(rel_tol=rel, abs_tol=min(1e-12, 1e-2 * rel))


def _grid_axes(spec: str):
    axes = []
    for i, part in enumerate(spec.split(",")):
        fields = part.split(":")
        if len(fields) != 3:
            raise UsageError(f"--grid axis {i + 1}: expected start:stop:step, got {part!r}")
        try:
            start, stop, step = (float(f) for f in fields)
        except ValueError:
            raise UsageError(f"--grid axis {i + 1}: non-numeric field in {part!r}") from None
        if not step > 0:
            raise UsageError(f"--grid axis {i + 1}: step must be positive")
        if stop < start:
            raise UsageError(f"--grid axis {i + 1}: stop below start")
        axes.append((start, stop, step))
    return axes


def cmd_g(args) -> int:
    if not 0 < args.alpha < 2:
        raise UsageError(f"--alpha must lie in (0, 2), got {args.alpha}")
    if not abs(args.beta) <= 1:
        raise UsageError(f"--beta must lie in [-1, 1], got {args.beta}")
    if args.d < 1:
        raise UsageError(f"--d must be at least 1, got {args.d}")
    if not args.v_step > 0 or args.v_to < args.v_from:
        raise UsageError("need --v-step > 0 and --v-to >= --v-from")
    (v,), _ = lattice([(args.v_from, args.v_to, args.v_step)])
    tol = _tolerance(args.tol)
    out = g_eval_many(v, args.beta, args.alpha, args.d, args.rep, tol)
    header = ["v", "value", "err_est", "method"]
    cols = [v, out.value, out.err_est, [METHOD_NAMES[int(m)] for m in out.method]]
    converged = out.converged.copy()
    if args.oracle:
        o = g_direct_many(v, args.beta, args.alpha, args.d, args.rep, tol)
        header += ["oracle", "abs_diff"]
        cols += [o.value, np.abs(out.value - o.value)]
        converged &= o.converged
    write_csv(sys.stdout, header, zip(*cols))
    if not converged.all():
        bad = v[~converged]
        print(f"error: quadrature did not converge at v = {bad.tolist()}", file=sys.stderr)
        return EXIT_NONCONV
    return EXIT_OK


def _rule(args, dim):
    if args.rule is None and args.nodes is None:
        return default_sphere_rule(dim, args.seed)
    kind = args.rule or {2: "trapezoid-d2", 3: "gauss-product-d3"}.get(dim, "montecarlo")
    n = args.nodes if args.nodes is not None else {2: 512, 3: 32}.get(dim, 200_000)
    return make_sphere_rule(dim, n, kind, args.seed)


def cmd_density(args) -> int:
    measure = load_measure(args.measure)
    axes = _grid_axes(args.grid)
    if len(axes) != measure.dim:
        raise UsageError(f"--grid has {len(axes)} axes but the measure has dimension {measure.dim}")
    _, points = lattice(axes)
    rule = _rule(args, measure.dim)
    res = density_at(DensityRequest(points, measure, args.route, rule, _tolerance(args.tol)))
    header = [f"x{i + 1}" for i in range(measure.dim)] + ["value", "err_est", "route"]
    rows = ([*p, r.value, r.err_est, r.route_used] for p, r in zip(points, res))
    write_csv(sys.stdout, header, rows)
    if not all(r.converged for r in res):
        print("error: quadrature did not converge at some lattice points", file=sys.stderr)
        return EXIT_NONCONV
    return EXIT_OK


def cmd_convert(args) -> int:
    measure = load_measure(args.measure)
    if measure.alpha == 1 and args.to != measure.rep:
        print("note: (A) and (M) coincide at alpha = 1; only the representation tag changes",
              file=sys.stderr)
    sys.stdout.write(dumps_measure(convert_measure(measure, args.to)))
    return EXIT_OK


def cmd_check(args) -> int:
    if not (args.tol > 0 and math.isfinite(args.tol)):
        raise UsageError(f"--tol must be positive, got {args.tol}")
    report = run_suite(args.suite, args.tol)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stableproj",
                                     description="Multivariate stable densities by projection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("g", help="projection function g on a grid of v")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rep", choices=REPRESENTATIONS, default="A")
    p.add_argument("--v-from", type=float, required=True)
    p.add_argument("--v-to", type=float, required=True)
    p.add_argument("--v-step", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10, help="relative quadrature tolerance")
    p.add_argument("--oracle", action="store_true", help="add oracle and abs_diff columns")
    p.set_defaults(func=cmd_g)

    p = sub.add_parser("density", help="density on a lattice")
    p.add_argument("--measure", required=True, help="measure JSON file")
    p.add_argument("--route", choices=ROUTES, default="auto")
    p.add_argument("--grid", required=True, help="x0:x1:step[,y0:y1:step,...]")
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--rule", choices=RULE_KINDS, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10, help="relative quadrature tolerance")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("convert", help="switch a measure between (A) and (M)")
    p.add_argument("--measure", required=True)
    p.add_argument("--to", choices=("A", "M"), required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("check", help="run an oracle cross-check suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--tol", type=float, default=1e-6, help="pass tolerance")
    p.set_defaults(func=cmd_check)
    return parser


def _attach_grid(argv):
    """Glue ``--grid`` to its value so lattices starting below zero parse."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--grid":
            out.append("--grid=" + next(it, ""))
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_grid(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return args.func(args)
    except DegenerateMeasureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConvergenceError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (UsageError, MeasureFormatError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
