"""Command-line front end.

Subcommands expose mixing coefficients, sum densities, exact samplers,
the oracle validations and the decomposition-curve data set as CSV or
JSON.  Exit codes: 0 success, 1 validation failure, 2 usage error,
3 numerical/truncation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .densities import (
    ConvolutionSpec,
    TruncationPolicy,
    g_component,
    gauss_student_sum_density,
    student_pair_sum_density,
)
from .errors import MomentUndefinedError, QuadratureError, TruncationError
from .mixing import (
    GaussStudentParams,
    StudentPairParams,
    alpha_sequence,
    alpha_supply,
    alpha_tail_moment,
    c_sequence,
    c_supply,
    c_tail_moment,
    complete_monotonicity_defect,
    k_mean,
    k_variance,
    n_mean,
    n_variance,
)
from .oracle import convolve_quadrature_1d, fourier_product_check, mc_density_check
from .sampling import sample_k, sample_n, sample_y, sample_z

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_FMT = "%.17g"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return _FMT % float(x)


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit_table(args, columns, rows, meta):
    """Write rows as CSV (with a provenance comment) or structured JSON."""
    stream, owned = _open_output(args.output)
    try:
        if args.format == "csv":
            prov = " ".join(f"{k}={v}" for k, v in meta.items())
            stream.write(f"# studentconv {prov}\n")
            stream.write(",".join(columns) + "\n")
            for row in rows:
                stream.write(",".join(_fmt(v) for v in row) + "\n")
        else:
            doc = {
                "schema": 1,
                "generator": f"studentconv {__version__}",
                "params": meta,
                "columns": columns,
                "rows": [[v if isinstance(v, str) else float(v) for v in row] for row in rows],
            }
            json.dump(doc, stream, indent=2)
            stream.write("\n")
    finally:
        if owned:
            stream.close()


def _emit_json(args, doc):
    stream, owned = _open_output(args.output)
    try:
        json.dump(doc, stream, indent=2)
        stream.write("\n")
    finally:
        if owned:
            stream.close()


def _parse_grid(text):
    try:
        lo, hi, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be min:max:step, got {text!r}")
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}")
    n = int(round((hi - lo) / step))
    return np.linspace(lo, hi, n + 1)


def _half_df(args, name="nu", dfname="df"):
    """Resolve half-df from --nu/--mu or the statistician-facing --df/--df2."""
    nu = getattr(args, name, None)
    df = getattr(args, dfname, None)
    if nu is not None and df is not None:
        raise SystemExit(_usage_error(f"give only one of --{name} and --{dfname}"))
    if nu is None and df is None:
        raise SystemExit(_usage_error(f"one of --{name} or --{dfname} is required"))
    return nu if nu is not None else df / 2.0


def _usage_error(msg):
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _gauss_params(args):
    gamma = getattr(args, "gamma", None)
    nu = _half_df(args)
    if gamma is not None:
        return GaussStudentParams(d=args.d, nu=nu, gamma=gamma)
    return GaussStudentParams(d=args.d, nu=nu, sigma=args.sigma)


def _pair_params(args):
    return StudentPairParams(d=args.d, nu=_half_df(args), mu=_half_df(args, "mu", "df2"))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_coeffs(args):
    if args.family == "alpha":
        seq = alpha_sequence(_gauss_params(args), args.eps, args.max_terms)
    else:
        seq = c_sequence(_pair_params(args), args.eps, args.max_terms)
    cum = np.cumsum(seq.values)
    rows = [(k, v, c) for k, (v, c) in enumerate(zip(seq.values, cum))]
    rows.append(("tail_bound", seq.tail_bound, seq.cumulative_mass))
    meta = {"command": "coeffs", "family": args.family, "digest": seq.params_digest, "eps": args.eps}
    _emit_table(args, ["index", "value", "cumulative_mass"], rows, meta)
    return EXIT_OK


def _cmd_density(args):
    grid = args.grid
    policy = TruncationPolicy(epsilon=args.eps)
    if args.law == "fz":
        p = _gauss_params(args)
        dens = gauss_student_sum_density(p, args.a1, args.a2, policy)
        meta = {"command": "density", "law": "fz", "digest": p.digest(), "a1": args.a1, "a2": args.a2}
    else:
        p = _pair_params(args)
        dens = student_pair_sum_density(p, policy)
        meta = {"command": "density", "law": "fy", "digest": p.digest()}
    values = dens.eval_radial(np.abs(grid))
    rows = list(zip(grid, values))
    _emit_table(args, ["r", "density"], rows, meta)
    return EXIT_OK


def _cmd_figure1(args):
    nu = _half_df(args)
    p = GaussStudentParams(d=1, nu=nu, sigma=args.sigma)
    policy = TruncationPolicy(epsilon=args.eps)
    dens = gauss_student_sum_density(p, policy=policy)
    grid = args.grid
    radii = np.abs(grid)
    fz = dens.eval_radial(radii)
    coeffs = alpha_supply(p).values(4)
    terms = [coeffs[k] * g_component(k, p.sigma, 1, radii) for k in range(4)]
    partial = np.sum(terms, axis=0)
    columns = ["z", "f_Z", "partial_sum_0_3", "term_0", "term_1", "term_2", "term_3"]
    rows = [
        (z, fz[i], partial[i], terms[0][i], terms[1][i], terms[2][i], terms[3][i])
        for i, z in enumerate(grid)
    ]
    meta = {"command": "figure1", "digest": p.digest(), "sigma": p.sigma}
    _emit_table(args, columns, rows, meta)
    return EXIT_OK


def _cmd_sample(args):
    law = args.law
    seed = args.seed
    count = args.count
    if law == "k":
        draws = sample_k(_gauss_params(args), count, seed)
        rows = [(int(v),) for v in draws.values]
        columns, digest = ["k"], "k-mixing"
    elif law == "n":
        draws = sample_n(_pair_params(args), count, seed)
        rows = [(int(v),) for v in draws.values]
        columns, digest = ["n"], "n-mixing"
    else:
        if law == "z":
            batch = sample_z(_gauss_params(args), count, seed, method=args.method or "gaussian-scale-mixture")
        else:
            batch = sample_y(_pair_params(args), count, seed, method=args.method or "subordination")
        rows = [tuple(pt) for pt in batch.points]
        columns = [f"x{i+1}" for i in range(batch.dimension)]
        digest = batch.spec_digest
    meta = {"command": "sample", "law": law, "seed": seed, "count": count, "digest": digest}
    _emit_table(args, columns, rows, meta)
    return EXIT_OK


def _moments_report(args):
    """Closed-form moments versus coefficient series sums (plus exact tails)."""
    kmax = args.terms
    rows = {}
    if args.family == "alpha":
        p = _gauss_params(args)
        vals = alpha_supply(p).values(kmax)
        idx = np.arange(kmax)
        mean_closed, var_closed = k_mean(p), k_variance(p)
        mean_series = float(idx @ vals) + alpha_tail_moment(p, kmax, 1)
        m2_series = float((idx * idx) @ vals) + alpha_tail_moment(p, kmax, 2)
        digest = p.digest()
    else:
        p = _pair_params(args)
        vals = c_supply(p).values(kmax)
        idx = np.arange(kmax)
        mean_closed, var_closed = n_mean(p), n_variance(p)
        mean_series = float(idx @ vals) + c_tail_moment(p, kmax, 1)
        m2_series = float((idx * idx) @ vals) + c_tail_moment(p, kmax, 2)
        digest = p.digest()
    var_series = m2_series - mean_series**2
    rows["mean_closed"] = mean_closed
    rows["mean_series"] = mean_series
    rows["variance_closed"] = var_closed
    rows["variance_series"] = var_series
    err = max(
        abs(mean_series - mean_closed) / abs(mean_closed),
        abs(var_series - var_closed) / abs(var_closed),
    )
    return {"digest": digest, "values": rows, "max_rel_err": err}


def _cmd_validate(args):
    tol_key = "max_abs_err"
    if args.check == "convolution":
        nu, mu = _half_df(args), _half_df(args, "mu", "df2")
        grid = args.grid if args.grid is not None else np.linspace(-10.0, 10.0, 201)
        report = convolve_quadrature_1d(nu, mu, grid)
        passed = report.max_abs_err <= args.tol
        payload = report.to_dict()
        threshold = args.tol
    elif args.check == "fourier":
        nu, mu = _half_df(args), _half_df(args, "mu", "df2")
        grid = args.grid if args.grid is not None else np.arange(0.1, 10.05, 0.1)
        report = fourier_product_check(nu, mu, grid)
        passed = report.max_abs_err <= args.tol
        payload = report.to_dict()
        threshold = args.tol
    elif args.check == "montecarlo":
        if args.family == "alpha":
            spec = ConvolutionSpec.gauss_student(args.d, _half_df(args), args.sigma)
        else:
            spec = ConvolutionSpec.student_pair(args.d, _half_df(args), _half_df(args, "mu", "df2"))
        report = mc_density_check(spec, args.count, args.seed or 0, bins=args.bins)
        passed = report.details["p_value"] >= args.level
        payload = report.to_dict()
        tol_key, threshold = "p_value", args.level
    elif args.check == "moments":
        payload = _moments_report(args)
        passed = payload["max_rel_err"] <= args.tol
        tol_key, threshold = "max_rel_err", args.tol
    elif args.check == "monotonicity":
        if args.family == "alpha":
            seq = alpha_sequence(_gauss_params(args), args.eps, args.max_terms)
        else:
            seq = c_sequence(_pair_params(args), args.eps, args.max_terms)
        defect = complete_monotonicity_defect(seq, args.order)
        payload = {"digest": seq.params_digest, "defect": defect, "max_order": args.order}
        passed = defect <= args.tol
        tol_key, threshold = "defect", args.tol
    else:  # pragma: no cover - argparse restricts choices
        return _usage_error(f"unknown check {args.check}")

    doc = {
        "schema": 1,
        "check": args.check,
        "passed": bool(passed),
        "threshold": {tol_key: threshold},
        "report": payload,
    }
    _emit_json(args, doc)
    return EXIT_OK if passed else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# parser


def _add_common_output(sp):
    sp.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_gauss_student(sp, with_scales=False):
    sp.add_argument("--nu", type=float, help="half degrees of freedom (df = 2 nu)")
    sp.add_argument("--df", type=float, help="degrees of freedom of the Student factor")
    sp.add_argument("--gamma", type=float, default=None, help="derived scale 1/(sigma sqrt 2)")
    sp.add_argument("--sigma", type=float, default=1.0, help="Gaussian scale (default 1)")
    sp.add_argument("--d", type=int, default=1, help="dimension (default 1)")
    if with_scales:
        sp.add_argument("--a1", type=float, default=1.0)
        sp.add_argument("--a2", type=float, default=1.0)


def _add_pair(sp):
    sp.add_argument("--mu", type=float, help="half degrees of freedom of the second Student")
    sp.add_argument("--df2", type=float, help="degrees of freedom of the second Student")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="studentconv",
        description="Densities, samplers and validations for sums of Student-t vectors.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("coeffs", help="mixing coefficient table")
    sp.add_argument("--family", choices=("alpha", "c"), required=True)
    _add_gauss_student(sp)
    _add_pair(sp)
    sp.add_argument("--eps", type=float, default=1e-8, help="tail mass tolerance")
    sp.add_argument("--max-terms", type=int, default=100_000)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_coeffs)

    sp = sub.add_parser("density", help="radial density table")
    sp.add_argument("--law", choices=("fz", "fy"), required=True)
    _add_gauss_student(sp, with_scales=True)
    _add_pair(sp)
    sp.add_argument("--grid", type=_parse_grid, required=True, help="min:max:step")
    sp.add_argument("--eps", type=float, default=1e-10, help="series tail tolerance")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_density)

    sp = sub.add_parser("figure1", help="density decomposition curves (d=1)")
    sp.add_argument("--nu", type=float, help="half degrees of freedom (default 1)")
    sp.add_argument("--df", type=float)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--grid", type=_parse_grid, default=_parse_grid("-8:8:0.05"))
    sp.add_argument("--eps", type=float, default=1e-10)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_figure1, _default_nu=True)

    sp = sub.add_parser("sample", help="draw from the exact samplers")
    sp.add_argument("--law", choices=("z", "y", "k", "n"), required=True)
    _add_gauss_student(sp)
    _add_pair(sp)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--method", default=None, help="stochastic representation override")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_sample)

    sp = sub.add_parser("validate", help="run an oracle check, exit 1 on violation")
    sp.add_argument(
        "--check",
        choices=("convolution", "fourier", "montecarlo", "moments", "monotonicity"),
        required=True,
    )
    sp.add_argument("--family", choices=("alpha", "c"), default="c")
    _add_gauss_student(sp)
    _add_pair(sp)
    sp.add_argument("--grid", type=_parse_grid, default=None)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--eps", type=float, default=1e-6)
    sp.add_argument("--level", type=float, default=0.01, help="test level for montecarlo")
    sp.add_argument("--count", type=int, default=1_000_000)
    sp.add_argument("--bins", type=int, default=40)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--order", type=int, default=6, help="max difference order for monotonicity")
    sp.add_argument("--terms", type=int, default=2000, help="series terms for moment sums")
    sp.add_argument("--max-terms", type=int, default=100_000)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_validate)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "_default_nu", False) and args.nu is None and args.df is None:
        args.nu = 1.0
    try:
        return args.func(args)
    except (ValueError, MomentUndefinedError) as exc:
        return _usage_error(str(exc))
    except (QuadratureError, TruncationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
