"""Command-line front end: ``python -m holeprob <command>`` or ``holeprob <command>``.

Commands and their columns
  energy    shape, a, b, alpha, beta, r_empty, r_hole, r_hole_prime_closed,
            r_hole_prime_quadrature, difference, decay_constant
  hole      kind, r, n, log_p, normalized_log_p, fitted_slope, decay_constant
            (one "point" row per radius, then one "fit" row)
  fekete    n, seed, energy, delta_n, min_separation, limit_energy, converged
  variance  L, r, p, variance, normalization, normalized, mean_count,
            lower_bound, upper_bound
  sample    k, radius, gamma_shape

Grids accept ``lo..hi:step``, ``lo..hi`` (17 evenly spaced points) and comma
lists. Reals are written with 17 significant digits. JSON output is
{"meta": {...}, "rows": [...]}.

Exit codes: 0 success, 1 a row missed its tolerance or a computation failed,
2 bad arguments or an unsupported energy problem, 3 method/shape mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .fekete import optimize_fekete
from .fluctuations import lower_bound, mean_count, upper_bound, variance_count, variance_linear
from .gram import GramSpec, NonBracketingError, fredholm_hole_oracle, hole_prob_gram
from .potential import (
    UnsupportedRegionError,
    candidate_for,
    check_admissible,
    decay_constant,
    equilibrium,
    halfdisk_series_constant,
    power_field,
    r_hole_closed_form,
    r_hole_from_balayage,
    triangle_energy_from_moment,
    triangle_moment_targets,
)
from .radial import EnsembleSpec, fit_decay_slope, hole_prob_annulus, hole_prob_disk, sample_radius_sets
from .regions import Region

EXIT_OK, EXIT_TOL, EXIT_UNSUPPORTED, EXIT_MISMATCH = 0, 1, 2, 3
SHAPES = ("empty", "disk", "annulus", "ellipse", "cardioid", "triangle", "halfdisk")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# -- parsing -------------------------------------------------------------

def parse_grid(text: str) -> List[float]:
    """``lo..hi:step``, ``lo..hi`` or ``a,b,c``; must be nonempty and sorted."""
    vals: List[float] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            span, _, step = part.partition(":")
            lo, hi = (float(x) for x in span.split(".."))
            if step:
                h = float(step)
                if not h > 0:
                    raise argparse.ArgumentTypeError("grid step must be positive")
                count = int(math.floor((hi - lo) / h + 1e-9)) + 1
                vals += [round(lo + i * h, 12) for i in range(count)]
            else:
                vals += [round(v, 12) for v in np.linspace(lo, hi, 17)]
        else:
            vals.append(float(part))
    if not vals:
        raise argparse.ArgumentTypeError("empty grid")
    if any(b < a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("grid must be sorted ascending")
    return vals


def parse_int_grid(text: str) -> List[int]:
    vals = parse_grid(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError("expected integers")
    return [int(v) for v in vals]


def positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# -- output --------------------------------------------------------------

def fmt_real(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x) + 0.0   # folds -0.0 into 0.0
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    return fmt_real(v)


def dumps_json(doc: dict) -> str:
    """Serializer used for output; parse + dumps_json reproduces a file byte for byte."""
    lines = ["{", f'  "meta": {_json_value(doc["meta"])},', '  "rows": [']
    rows = doc["rows"]
    for i, row in enumerate(rows):
        lines.append("    " + _json_value(row) + ("," if i < len(rows) - 1 else ""))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def dumps_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if row.get(c) is None else (row[c] if isinstance(row[c], str) else fmt_real(row[c]))
                    for c in columns])
    return buf.getvalue()


def emit(args, columns, rows, tolerances):
    if args.format == "json":
        config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}
        meta = {"tool": "holeprob", "version": __version__, "command": args.command,
                "config": config, "tolerances": tolerances, "columns": list(columns)}
        text = dumps_json({"meta": meta, "rows": [{c: row.get(c) for c in columns} for row in rows]})
    else:
        text = dumps_csv(columns, rows)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- regions -------------------------------------------------------------

def build_region(args) -> Region:
    shape = args.shape
    a, b = args.a, args.b
    try:
        if shape == "empty":
            return Region.empty()
        if shape == "disk":
            return Region.disk(1.0 if a is None else a, complex(args.cx, args.cy))
        if shape == "annulus":
            if args.c is not None:
                return Region.annulus(args.c, 1.0)
            return Region.annulus(a, b)
        if shape == "ellipse":
            return Region.ellipse(a, b)
        if shape == "cardioid":
            return Region.cardioid(a, b)
        if shape == "triangle":
            return Region.triangle(1.0 if a is None else a)
        if shape == "halfdisk":
            return Region.halfdisk(1.0 if a is None else a)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid {shape} parameters: {exc}", EXIT_UNSUPPORTED)
    raise CliError(f"unknown shape {shape}", EXIT_UNSUPPORTED)


def _add_shape_args(p, default="disk"):
    p.add_argument("--shape", choices=SHAPES, default=default)
    p.add_argument("--a", type=float, default=None, help="radius / first semi-axis / inner radius")
    p.add_argument("--b", type=float, default=None, help="second semi-axis / outer radius / cardioid scale")
    p.add_argument("--c", type=float, default=None, help="annulus inner radius with outer radius 1")
    p.add_argument("--cx", type=float, default=0.0, help="disk center, real part")
    p.add_argument("--cy", type=float, default=0.0, help="disk center, imaginary part")


# -- commands ------------------------------------------------------------

def _quadrature_prime(region: Region, alpha: float, beta: float):
    """R_U - R_empty by the boundary-measure route, or None when no such route exists."""
    if region.is_empty:
        return 0.0
    f = power_field(alpha, 2.0 / beta)
    meas = equilibrium(f)
    check_admissible(region, meas.T)
    if region.kind == "triangle" and alpha == 2 and beta == 2:
        _, t_moment = triangle_moment_targets(region.a)
        return triangle_energy_from_moment(region.a, t_moment)
    if region.kind == "halfdisk" and alpha == 2 and beta == 2:
        return halfdisk_series_constant(region.a)
    try:
        cand = candidate_for(region, f, alpha2=(alpha == 2))
    except UnsupportedRegionError:
        return None
    return r_hole_from_balayage(region, f, cand, meas) - meas.r_empty


def _closed_prime(region: Region, alpha: float, beta: float):
    """Closed-form R_U - R_empty, or None when none is tabulated."""
    if beta != 2:
        if region.is_empty:
            return 0.0
        if region.kind == "disk" and alpha == 2:
            return region.a ** 4 / beta ** 2
        return None
    try:
        return r_hole_closed_form(region, alpha)
    except UnsupportedRegionError:
        return None


def cmd_energy(args):
    region = build_region(args)
    rows, status = [], EXIT_OK
    for alpha in args.alpha:
        beta = args.beta
        meas = equilibrium(power_field(alpha, 2.0 / beta))
        closed = _closed_prime(region, alpha, beta)
        try:
            quad = _quadrature_prime(region, alpha, beta)
        except UnsupportedRegionError as exc:
            raise CliError(f"unsupported energy problem: {exc} (hypothesis: the hole must lie "
                           "inside the equilibrium support disk)", EXIT_UNSUPPORTED)
        if closed is None and quad is None:
            raise CliError(
                f"unsupported energy problem: no closed form or balayage for {region.kind} with "
                f"alpha={alpha:g}, beta={beta:g} (hypothesis: the sweep of mu onto the boundary "
                "must be known, i.e. quadratic field or a centered disk/annulus)", EXIT_UNSUPPORTED)
        prime = closed if closed is not None else quad
        diff = None if closed is None or quad is None else quad - closed
        if diff is not None and abs(diff) > args.tol:
            status = EXIT_TOL
        rows.append({
            "shape": region.kind, "a": region.a, "b": region.b, "alpha": alpha, "beta": beta,
            "r_empty": meas.r_empty, "r_hole": meas.r_empty + prime,
            "r_hole_prime_closed": closed, "r_hole_prime_quadrature": quad,
            "difference": diff, "decay_constant": -prime,
        })
    cols = ["shape", "a", "b", "alpha", "beta", "r_empty", "r_hole", "r_hole_prime_closed",
            "r_hole_prime_quadrature", "difference", "decay_constant"]
    emit(args, cols, rows, {"difference": args.tol})
    return status


RADIAL_SHAPES = ("disk", "annulus")


def cmd_hole(args):
    region = build_region(args)
    alpha = args.alpha
    if region.is_empty:
        raise CliError("hole needs a nonempty shape", EXIT_MISMATCH)
    if args.method == "radial" and (region.kind not in RADIAL_SHAPES or region.center != 0):
        raise CliError(f"method radial needs a centered disk or annulus, got {region.kind}", EXIT_MISMATCH)
    if args.method == "fredholm" and args.order > 4:
        raise CliError("fredholm order is capped at 4", EXIT_MISMATCH)
    rows, r_used, logs = [], [], []
    status = EXIT_OK
    for r in args.r:
        scaled = region.scaled(r)
        n = args.n
        if args.method == "radial":
            spec = EnsembleSpec(alpha, n)
            if scaled.kind == "disk":
                res = hole_prob_disk(spec, scaled.a)
            else:
                res = hole_prob_annulus(spec, scaled.a, scaled.b)
            log_p = res.log_prob
        elif args.method == "gram":
            n = n if n is not None else int(math.ceil(2 * r ** alpha - 1e-9))
            log_p = hole_prob_gram(GramSpec(n, alpha, scaled))
        else:
            try:
                fr = fredholm_hole_oracle(scaled, alpha, n, order=args.order)
            except NonBracketingError as exc:
                raise CliError(str(exc), EXIT_TOL)
            log_p = math.log(fr.estimate) if fr.estimate > 0 else -math.inf
            if fr.width > args.tol:
                status = EXIT_TOL
        rows.append({"kind": "point", "r": r, "n": n, "log_p": log_p,
                     "normalized_log_p": log_p / r ** (2 * alpha)})
        r_used.append(r)
        logs.append(log_p)
    try:
        dc = decay_constant(region, alpha)
    except UnsupportedRegionError:
        dc = None
    slope = None
    if len(r_used) >= 4 and all(np.isfinite(logs)):
        slope = fit_decay_slope(r_used, logs, alpha, corrected=not args.naive_fit)
    rows.append({"kind": "fit", "fitted_slope": slope, "decay_constant": dc})
    cols = ["kind", "r", "n", "log_p", "normalized_log_p", "fitted_slope", "decay_constant"]
    emit(args, cols, rows, {"fredholm_width": args.tol})
    return status


def cmd_fekete(args):
    region = build_region(args)
    f = power_field(args.alpha)
    meas = equilibrium(f)
    try:
        limit = meas.r_empty + (r_hole_closed_form(region, args.alpha) if not region.is_empty else 0.0)
    except UnsupportedRegionError:
        limit = None
    rows, status = [], EXIT_OK
    for n in args.n:
        res = optimize_fekete(n, f, None if region.is_empty else region, seed=args.seed,
                              budget=args.budget, starts=args.starts)
        if not res.converged:
            status = EXIT_TOL
        rows.append({"n": n, "seed": res.seed, "energy": res.energy, "delta_n": res.delta_n,
                     "min_separation": res.min_separation, "limit_energy": limit,
                     "converged": bool(res.converged)})
    cols = ["n", "seed", "energy", "delta_n", "min_separation", "limit_energy", "converged"]
    emit(args, cols, rows, {"budget": args.budget})
    return status


def cmd_variance(args):
    rows = []
    ps = args.p if args.p is not None else [None]
    for L in args.L:
        for p in ps:
            for r in args.r:
                if p is None:
                    res = variance_count(L, r, tol=args.tol)
                    lo, hi = lower_bound(L), upper_bound(L)
                else:
                    res = variance_linear(L, r, p, tol=args.tol)
                    lo = hi = None
                rows.append({"L": L, "r": r, "p": p, "variance": res.value,
                             "normalization": res.normalization, "normalized": res.normalized,
                             "mean_count": mean_count(L, r), "lower_bound": lo, "upper_bound": hi})
    cols = ["L", "r", "p", "variance", "normalization", "normalized", "mean_count",
            "lower_bound", "upper_bound"]
    emit(args, cols, rows, {"relative": args.tol})
    return EXIT_OK


def cmd_sample(args):
    spec = EnsembleSpec(args.alpha, args.n)
    radii = sample_radius_sets(spec, args.n, args.samples, args.seed)
    rows = []
    for s in range(args.samples):
        for k in range(args.n):
            row = {"k": k + 1, "radius": float(radii[s, k]), "gamma_shape": 2.0 * (k + 1) / args.alpha}
            if args.samples > 1:
                row["sample"] = s
            rows.append(row)
    cols = (["sample"] if args.samples > 1 else []) + ["k", "radius", "gamma_shape"]
    emit(args, cols, rows, {})
    return EXIT_OK


# -- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holeprob", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"holeprob {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", parents=[common], help="minimum energies R_empty, R_U and R_U'")
    _add_shape_args(p)
    p.add_argument("--alpha", type=parse_grid, default=[2.0], help="exponent grid (default 2)")
    p.add_argument("--beta", type=positive, default=2.0, help="inverse temperature (default 2)")
    p.add_argument("--tol", type=positive, default=1e-6, help="closed form vs quadrature (default 1e-6)")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("hole", parents=[common], help="hole probabilities over a radius grid")
    _add_shape_args(p)
    p.add_argument("--alpha", type=positive, default=2.0)
    p.add_argument("--method", choices=("radial", "gram", "fredholm"), default="radial")
    p.add_argument("--n", type=int, default=None, help="finite ensemble size (default: infinite; "
                                                        "gram uses ceil(2 r^alpha))")
    p.add_argument("--r", type=parse_grid, default=parse_grid("4..8:0.25"), help="default 4..8:0.25")
    p.add_argument("--order", type=int, default=4, help="fredholm truncation order (<= 4)")
    p.add_argument("--tol", type=positive, default=1e-6, help="fredholm bracket width (default 1e-6)")
    p.add_argument("--naive-fit", action="store_true", help="fit log P on r^(2 alpha) and 1 only")
    p.set_defaults(func=cmd_hole)

    p = sub.add_parser("fekete", parents=[common], help="weighted Fekete energies")
    _add_shape_args(p, default="empty")
    p.add_argument("--n", type=parse_int_grid, default=[10, 20, 40])
    p.add_argument("--alpha", type=positive, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=3)
    p.add_argument("--budget", type=int, default=5000)
    p.set_defaults(func=cmd_fekete)

    p = sub.add_parser("variance", parents=[common], help="variances for the unit-disk ensembles")
    p.add_argument("--L", type=parse_grid, default=[1.0])
    p.add_argument("--r", type=parse_grid, default=[0.9, 0.95, 0.99])
    p.add_argument("--p", type=parse_grid, default=None, help="phi_p exponents (default: counting)")
    p.add_argument("--tol", type=positive, default=1e-8, help="relative quadrature tolerance")
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("sample", parents=[common], help="sample the moduli of X_n")
    p.add_argument("--alpha", type=positive, default=2.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"holeprob {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, ArithmeticError) as exc:
        print(f"holeprob {args.command}: {exc}", file=sys.stderr)
        return EXIT_TOL


if __name__ == "__main__":
    sys.exit(main())
