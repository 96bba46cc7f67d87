"""Command-line front end.

Subcommands: ``curve info``, ``periods``, ``eval``, ``verify``, ``kummer``,
``kdv``.  Complex numbers are "re,im" pairs on the command line and
two-element [re, im] arrays in JSON; CSV splits them into _re/_im columns.
Exit codes: 0 success, 1 identity failure, 2 invalid input, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

import numpy as np

from .curves import (
    basepoints,
    curve_v_from_alpha_beta,
    alpha_beta_from_e,
    e_from_alpha_beta,
    elliptic_targets,
    kappas,
)
from .errors import G2EllError, InvalidParameters, NonConvergence
from .numerics import Tolerance
from .periods import humbert_delta4, periods_g2
from .reduction import kdv_residuals, kummer_Z, make_context
from .sigma import jacobi_sn_cn_dn
from .verify import SUITES, run_suites, sample_jacobian_points

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_NONCONVERGENCE = 3


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise InvalidParameters(f"expected 're' or 're,im', got {text!r}")


def _pair(z: complex) -> list:
    return [float(np.real(z)) + 0.0, float(np.imag(z)) + 0.0]


def _curve_from_args(args) -> "CurveV":
    if args.e1 is not None or args.e2 is not None:
        if args.e1 is None or args.e2 is None:
            raise InvalidParameters("--e1 and --e2 must be given together")
        alpha, beta = alpha_beta_from_e(_parse_complex(args.e1), _parse_complex(args.e2))
        return curve_v_from_alpha_beta(alpha, beta)
    if args.alpha is None or args.beta is None:
        raise InvalidParameters("provide --alpha and --beta (or --e1 and --e2)")
    return curve_v_from_alpha_beta(_parse_complex(args.alpha), _parse_complex(args.beta))


def _emit(text: str, output: Optional[str]) -> None:
    if output and output != "-":
        with open(output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc: dict, output: Optional[str]) -> None:
    _emit(json.dumps(doc, indent=2, allow_nan=False) + "\n", output)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_curve_info(args) -> int:
    curve = _curve_from_args(args)
    e1, e2 = e_from_alpha_beta(curve.alpha, curve.beta)
    t1, t2 = elliptic_targets(curve)
    k1, k2 = kappas(curve)
    o1, o2 = basepoints(curve)
    doc = {
        "alpha": _pair(curve.alpha),
        "beta": _pair(curve.beta),
        "lambda2": _pair(curve.lambda2),
        "lambda4": _pair(curve.lambda4),
        "lambda6": _pair(curve.lambda6),
        "lambda8": _pair(curve.lambda8),
        "lambda10": _pair(curve.lambda10),
        "branch_points": [_pair(b) for b in curve.branch_points],
        "e1": _pair(e1),
        "e2": _pair(e2),
        "E1_third_root": _pair(t1.c),
        "E2_third_root": _pair(t2.c),
        "kappa1": _pair(k1),
        "kappa2": _pair(k2),
        "O1": [_pair(o1.x), _pair(o1.y)],
        "O2": [_pair(o2.x), _pair(o2.y)],
    }
    _emit_json(doc, args.output)
    return EXIT_OK


def _cmd_periods(args) -> int:
    curve = _curve_from_args(args)
    tol = Tolerance(abs_tol=args.tol, rel_tol=args.tol)
    per = periods_g2(curve, tol)
    doc = per.to_json()
    rel = humbert_delta4(per.tau, bound=20, tol=1e-6)
    if rel is not None:
        doc["humbert"] = rel.to_json()
    _emit_json(doc, args.output)
    return EXIT_OK


def _cmd_eval(args) -> int:
    curve = _curve_from_args(args)
    tol = Tolerance(abs_tol=args.tol, rel_tol=args.tol)
    ctx = make_context(curve, tol)
    what = args.what
    if what == "wp":
        if args.u is None:
            raise InvalidParameters("eval wp needs --u re,im,re,im")
        vals = [float(v) for v in args.u.split(",")]
        if len(vals) != 4:
            raise InvalidParameters("--u must have four floats re,im,re,im")
        u = np.array([vals[0] + 1j * vals[1], vals[2] + 1j * vals[3]])
        indices = tuple(int(c) for c in args.jk)
        value = ctx.sig_v.wp(indices, u)
        _emit_json({"value": _pair(value)}, args.output)
        return EXIT_OK
    if what == "sigma":
        vals = [float(v) for v in args.u.split(",")]
        u = np.array([vals[0] + 1j * vals[1], vals[2] + 1j * vals[3]])
        _emit_json({"value": _pair(ctx.sig_v.sigma(u))}, args.output)
        return EXIT_OK
    if what == "wpE":
        v = _parse_complex(args.v)
        ev = ctx.sig_e[args.index - 1]
        w, wp = ev.wp_with_prime(v)
        _emit_json({"value": _pair(w), "derivative": _pair(wp)}, args.output)
        return EXIT_OK
    if what == "sn":
        v = _parse_complex(args.v)
        sn, cn, dn = jacobi_sn_cn_dn(ctx.jac[args.index - 1], v)
        _emit_json({"sn": _pair(sn), "cn": _pair(cn), "dn": _pair(dn)}, args.output)
        return EXIT_OK
    if what == "al":
        v = _parse_complex(args.v)
        value = ctx.tilde[args.index - 1].al(args.j, v)
        _emit_json({"value": _pair(value)}, args.output)
        return EXIT_OK
    raise InvalidParameters(f"unknown eval target {what!r}")


def _require_samples(args) -> None:
    if getattr(args, "samples", 1) < 1:
        raise InvalidParameters("--samples must be at least 1")


def _cmd_verify(args) -> int:
    _require_samples(args)
    curve = _curve_from_args(args)
    tol = Tolerance(abs_tol=args.tol, rel_tol=args.tol)
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    override = None
    if args.perturb_lambda4:
        override = {"lambda4": curve.lambda4 + args.perturb_lambda4}
    report = run_suites(curve, suites, args.samples, args.seed, tol, override)
    _emit_json(report, args.output)
    return EXIT_OK if report["pass"] else EXIT_IDENTITY_FAILURE


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cmd_kummer(args) -> int:
    _require_samples(args)
    curve = _curve_from_args(args)
    tol = Tolerance(abs_tol=args.tol, rel_tol=args.tol)
    ctx = make_context(curve, tol)
    rng = np.random.default_rng(args.seed)
    points = sample_jacobian_points(ctx, rng, args.samples)
    header = ["u1_re", "u1_im", "u3_re", "u3_im"]
    for tag in ("wp11", "wp13", "wp33", "Z1", "Z2", "Z3"):
        header += [f"{tag}_re", f"{tag}_im"]
    rows = []
    for u in points:
        w = ctx.wps(u)
        z = kummer_Z(ctx, u)
        row = [u[0].real, u[0].imag, u[1].real, u[1].imag]
        for val in (w[(1, 1)], w[(1, 3)], w[(3, 3)], *z):
            row += [val.real, val.imag]
        rows.append([repr(float(v)) for v in row])
    _emit(_csv_text(header, rows), args.output)
    return EXIT_OK


def _cmd_kdv(args) -> int:
    _require_samples(args)
    curve = _curve_from_args(args)
    tol = Tolerance(abs_tol=args.tol, rel_tol=args.tol)
    ctx = make_context(curve, tol)
    rng = np.random.default_rng(args.seed)
    points = sample_jacobian_points(ctx, rng, args.samples)
    header = ["u1_re", "u1_im", "u3_re", "u3_im", "r_flow", "r_mixed", "r_compat"]
    rows = []
    for u in points:
        r = kdv_residuals(ctx, u, h=args.step)
        rows.append([repr(float(v)) for v in (u[0].real, u[0].imag, u[1].real, u[1].imag, *r)])
    _emit(_csv_text(header, rows), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_curve_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", help="curve parameter alpha as re,im")
    parser.add_argument("--beta", help="curve parameter beta as re,im")
    parser.add_argument("--e1", help="alternative parameterization: e1 as re,im")
    parser.add_argument("--e2", help="alternative parameterization: e2 as re,im")
    parser.add_argument("--tol", type=float, default=1e-12, help="numerical tolerance target")
    parser.add_argument("--output", default="-", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="g2ell",
        description="Genus-2 sigma/wp functions and their elliptic reductions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_curve = sub.add_parser("curve", help="curve constructions")
    curve_sub = p_curve.add_subparsers(dest="curve_command", required=True)
    p_info = curve_sub.add_parser("info", help="derived constants of the curve family")
    _add_curve_options(p_info)
    p_info.set_defaults(handler=_cmd_curve_info)

    p_per = sub.add_parser("periods", help="genus-2 period matrices and Humbert relation")
    _add_curve_options(p_per)
    p_per.set_defaults(handler=_cmd_periods)

    p_eval = sub.add_parser("eval", help="evaluate wp / sigma / elliptic functions")
    p_eval.add_argument("what", choices=["wp", "wpE", "sn", "al", "sigma"])
    _add_curve_options(p_eval)
    p_eval.add_argument("--jk", default="11", help="wp index string: 11|13|33|111|113|133|333")
    p_eval.add_argument("--u", help="genus-2 argument re,im,re,im")
    p_eval.add_argument("--v", help="scalar argument re,im")
    p_eval.add_argument("--i", dest="index", type=int, default=1, choices=(1, 2), help="elliptic target index")
    p_eval.add_argument("--j", type=int, default=1, choices=(1, 2, 3), help="al function index")
    p_eval.set_defaults(handler=_cmd_eval)

    p_verify = sub.add_parser("verify", help="run identity verification suites")
    _add_curve_options(p_verify)
    p_verify.add_argument("--suite", default="all", choices=["all", *SUITES])
    p_verify.add_argument("--samples", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument(
        "--perturb-lambda4",
        type=float,
        default=0.0,
        help="negative control: offset lambda4 inside the relation checks",
    )
    p_verify.set_defaults(handler=_cmd_verify)

    p_kum = sub.add_parser("kummer", help="CSV of wp and Kummer coordinates at sampled points")
    _add_curve_options(p_kum)
    p_kum.add_argument("--samples", type=int, default=20)
    p_kum.add_argument("--seed", type=int, default=42)
    p_kum.set_defaults(handler=_cmd_kummer)

    p_kdv = sub.add_parser("kdv", help="CSV of hierarchy residuals at sampled points")
    _add_curve_options(p_kdv)
    p_kdv.add_argument("--samples", type=int, default=20)
    p_kdv.add_argument("--seed", type=int, default=42)
    p_kdv.add_argument("--step", type=float, default=1e-3)
    p_kdv.set_defaults(handler=_cmd_kdv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InvalidParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except G2EllError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IDENTITY_FAILURE


if __name__ == "__main__":
    sys.exit(main())
