"""Command-line front end.

Subcommands: ``weights``, ``corrections``, ``solve``, ``table``, ``region``,
``check-stability``. Exit status is 0 on success, 2 on invalid input and 3 on
a numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import __version__
from .correction import exponent_set, solve_starting_weights
from .errors import FracThetaError, MalformedRange, NumericalFailure
from .quadrature import UniformGrid
from .scheme import StabilityAdvisory, make_scheme
from .solvers import (
    abel_problem,
    bagley_torvik_problem,
    caputo_problem,
    convergence_table,
    solve_abel,
    solve_bagley_torvik,
    solve_caputo_linear,
)
from .stability import a_stability_angle, a_theta_check, boundary_curve, real_intercept
from .weights import weights_by_recurrence

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

CORRECTION_MODES = {"auto": "leading", "on": "full", "off": "none"}


def parse_h_list(text: str) -> list:
    """Parse ``1/a..1/b`` (``b = a 2^k``) or a comma list into decreasing Fractions."""
    text = text.strip()
    m = re.fullmatch(r"1/(\d+)\s*\.\.\s*1/(\d+)", text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if a <= 0 or b < a:
            raise MalformedRange(f"bad range {text!r}")
        k = 0
        while a * 2**k < b:
            k += 1
        if a * 2**k != b:
            raise MalformedRange(f"{text!r}: {b} is not {a} times a power of two")
        return [Fraction(1, a * 2**i) for i in range(k + 1)]
    try:
        hs = [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise MalformedRange(f"cannot parse step list {text!r}") from None
    if not hs or any(h <= 0 for h in hs):
        raise MalformedRange(f"step sizes must be positive: {text!r}")
    if any(b >= a for a, b in zip(hs[:-1], hs[1:])):
        raise MalformedRange(f"step sizes must decrease: {text!r}")
    return hs


def _floats(text: str) -> list:
    try:
        return [float(Fraction(t.strip())) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a comma list of reals, got {text!r}") from None


def _complex(text: str) -> complex:
    parts = _floats(text)
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise argparse.ArgumentTypeError(f"--lambda takes re or re,im, got {text!r}")


def _single(values, name):
    if values is None:
        raise FracThetaError(f"--{name} is required")
    if len(values) != 1:
        raise FracThetaError(f"--{name} takes a single value here")
    return values[0]


def _fmt(x: float, digits: int) -> str:
    if math.isnan(x):
        return "nan"
    return f"{x:.{digits - 1}e}"


def _emit(args, header, rows, metadata):
    if args.format == "json":
        payload = {"metadata": metadata, "columns": header, "rows": [dict(zip(header, r)) for r in rows]}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for r in rows:
            buf.write(",".join(str(v) for v in r) + "\n")
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scheme_meta(scheme):
    return {"family": scheme.family.value, "alpha": scheme.alpha, "theta": scheme.theta}


# subcommands ------------------------------------------------------------------

def cmd_weights(args):
    scheme = make_scheme(args.family, _single(args.alpha, "alpha"), _single(args.theta, "theta"))
    table = weights_by_recurrence(scheme, args.n)
    rows = [(j, _fmt(float(w), 17)) for j, w in enumerate(table.omega)]
    _emit(args, ["j", "omega"], rows, {"scheme": _scheme_meta(scheme), "n": args.n})


def cmd_corrections(args):
    scheme = make_scheme(args.family, _single(args.alpha, "alpha"), _single(args.theta, "theta"))
    if args.mu is None:
        raise FracThetaError("--mu (leading exponent beta) is required")
    table = weights_by_recurrence(scheme, args.n)
    cset = solve_starting_weights(table, exponent_set(args.mu, scheme.alpha), args.n)
    rows = [
        (n, j, _fmt(float(v), 17))
        for n, row in enumerate(cset.start_weights)
        for j, v in enumerate(row, start=1)
    ]
    meta = {"scheme": _scheme_meta(scheme), "beta": args.mu, "exponents": list(cset.exponent_set.exponents)}
    _emit(args, ["n", "j", "omega_nj"], rows, meta)


def _grid(args):
    if args.h is not None:
        hs = parse_h_list(args.h)
        if len(hs) != 1:
            raise FracThetaError("solve takes a single step size in --h")
        return UniformGrid(args.L, int(round(args.L / float(hs[0]))))
    if args.n is None:
        raise FracThetaError("give --h or --n")
    return UniformGrid(args.L, args.n)


def cmd_solve(args):
    grid = _grid(args)
    if args.example == "caputo":
        alpha = _single(args.alpha, "alpha")
        scheme = make_scheme(args.family, -alpha, _single(args.theta, "theta"))
        spec = caputo_problem(alpha)
        report = solve_caputo_linear(scheme, spec, grid)
        schemes = [scheme]
    elif args.example == "abel":
        alpha = _single(args.alpha, "alpha")
        scheme = make_scheme(args.family, alpha, _single(args.theta, "theta"))
        lam = args.lam.real if args.lam.imag == 0 else args.lam
        spec = abel_problem(alpha, lam)
        report = solve_abel(scheme, spec, grid)
        schemes = [scheme]
    else:
        s1 = make_scheme(args.family, -2.0, _single(args.theta1, "theta1"))
        s2 = make_scheme(args.family, -1.5, _single(args.theta2, "theta2"))
        spec = bagley_torvik_problem(args.mu if args.mu is not None else 1.1)
        report = solve_bagley_torvik(s1, s2, spec, grid, correction=CORRECTION_MODES[args.correction])
        schemes = [s1, s2]

    ex = report.exact_values(spec)
    u_all = report.numerical
    is_complex = np.iscomplexobj(u_all)
    rows = []
    for n, x in enumerate(grid.nodes):
        u = u_all[n]
        row = [n, _fmt(float(x), 17), _fmt(float(u.real), 17)]
        if is_complex:
            row.append(_fmt(float(u.imag), 17))
        if ex is None:
            row += ["", ""]
        else:
            row += [_fmt(float(ex[n]), 17), _fmt(abs(u - ex[n]), 17)]
        rows.append(tuple(row))
    meta = {
        "example": args.example,
        "schemes": [_scheme_meta(s) for s in schemes],
        "L": grid.L,
        "N": grid.N,
        "max_error": report.max_error,
    }
    header = ["n", "x", "u_num", "u_exact", "abs_err"]
    if is_complex:
        header.insert(3, "u_num_imag")
    _emit(args, header, rows, meta)


def _h_label(h: Fraction) -> str:
    return str(h)


def cmd_table(args):
    hs = parse_h_list(args.h)
    if args.example == "caputo":
        alphas = args.alpha
        thetas = args.theta
        if not alphas or not thetas:
            raise FracThetaError("table --example caputo needs --alphas and --thetas")
        for a in alphas:
            for th in thetas:
                make_scheme(args.family, -a, th)
        rows = convergence_table("CaputoLinear", args.family, alphas, thetas, [float(h) for h in hs], L=args.L)
        header = ["alpha", "theta", "h", "error", "rate"]
        out = []
        for i, r in enumerate(rows):
            h = hs[i % len(hs)]
            rate = "" if i % len(hs) == 0 else _fmt(r.rate, 6)
            out.append((f"{r.alpha:g}", f"{r.thetas[0]:g}", _h_label(h), _fmt(r.error, 6), rate))
    elif args.example == "bagley":
        if not args.theta1 or not args.theta2 or len(args.theta1) != len(args.theta2):
            raise FracThetaError("table --example bagley needs --theta1 and --theta2 lists of equal length")
        pairs = list(zip(args.theta1, args.theta2))
        for t1, t2 in pairs:
            make_scheme(args.family, -2.0, t1)
            make_scheme(args.family, -1.5, t2)
        mu = args.mu if args.mu is not None else 1.1
        rows = convergence_table(
            "BagleyTorvik", args.family, None, pairs, [float(h) for h in hs],
            mu=mu, L=args.L, correction=CORRECTION_MODES[args.correction],
        )
        header = ["alpha", "theta1", "theta2", "h", "error", "rate"]
        out = []
        for i, r in enumerate(rows):
            h = hs[i % len(hs)]
            rate = "" if i % len(hs) == 0 else _fmt(r.rate, 6)
            out.append(("", f"{r.thetas[0]:g}", f"{r.thetas[1]:g}", _h_label(h), _fmt(r.error, 6), rate))
    else:
        raise FracThetaError("table supports --example caputo or bagley")
    meta = {"example": args.example, "family": args.family.upper(), "h": [str(h) for h in hs]}
    _emit(args, header, out, meta)


def cmd_region(args):
    scheme = make_scheme(args.family, _single(args.alpha, "alpha"), _single(args.theta, "theta"))
    curve = boundary_curve(scheme, args.samples)
    rows = [(_fmt(float(p), 17), _fmt(float(z.real), 17), _fmt(float(z.imag), 17)) for p, z in zip(curve.phi, curve.z)]
    if curve.limit_point is not None:
        rows.append((_fmt(0.0, 17), _fmt(0.0, 17), _fmt(0.0, 17)))
    meta = {
        "scheme": _scheme_meta(scheme),
        "samples": args.samples,
        "real_intercept": real_intercept(scheme),
        "limit_at_infinity": curve.limit_point is None,
    }
    _emit(args, ["phi", "re_z", "im_z"], rows, meta)


def cmd_check_stability(args):
    scheme = make_scheme(args.family, _single(args.alpha, "alpha"), _single(args.theta, "theta"))
    curve = boundary_curve(scheme, args.samples)
    vartheta = args.vartheta if args.vartheta is not None else a_stability_angle(scheme.alpha)
    verdict = a_theta_check(curve, vartheta)
    row = (
        scheme.family.value,
        f"{scheme.alpha:g}",
        f"{scheme.theta:g}",
        _fmt(vartheta, 17),
        "stable-evidence" if verdict.stable else "violation",
        "" if verdict.phi is None else _fmt(verdict.phi, 17),
        _fmt(real_intercept(scheme), 17),
    )
    header = ["family", "alpha", "theta", "vartheta", "verdict", "phi", "real_intercept"]
    _emit(args, header, [row], {"scheme": _scheme_meta(scheme), "samples": args.samples})


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", type=str.lower, choices=["bt", "bn"], default="bt")
    common.add_argument("--alpha", "--alphas", dest="alpha", type=_floats, help="real or comma list")
    common.add_argument("--theta", "--thetas", dest="theta", type=_floats, help="real or comma list")
    common.add_argument("--theta1", type=_floats, help="theta for u'' (Bagley-Torvik)")
    common.add_argument("--theta2", type=_floats, help="theta for D^{3/2} (Bagley-Torvik)")
    common.add_argument("--mu", type=float, help="singular exponent (Bagley-Torvik / corrections)")
    common.add_argument("--lambda", dest="lam", type=_complex, default=complex(-1.0), help="re[,im]")
    common.add_argument("--n", type=int, help="number of steps or weights")
    common.add_argument("--h", type=str, help="step size(s): 1/a..1/b or comma list")
    common.add_argument("--L", type=float, default=1.0, help="interval length")
    common.add_argument("--samples", type=int, default=4096)
    common.add_argument("--correction", choices=sorted(CORRECTION_MODES), default="auto")
    common.add_argument("--example", choices=["caputo", "abel", "bagley"], default="caputo")
    common.add_argument("--vartheta", type=float, help="sector half-angle (default (1-alpha/2) pi)")
    common.add_argument("--out", type=str, help="output path (default stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    parser = argparse.ArgumentParser(prog="fractheta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in [
        ("weights", cmd_weights, "dump convolution weights"),
        ("corrections", cmd_corrections, "dump starting weights"),
        ("solve", cmd_solve, "solve a built-in model problem"),
        ("table", cmd_table, "reproduce a convergence table"),
        ("region", cmd_region, "export a stability-region boundary"),
        ("check-stability", cmd_check_stability, "sector test on the boundary"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
    return parser


_NUMERIC_LIST = re.compile(r"-[\d.][\d.,/eE+-]*")


def _attach_negative_values(argv):
    # argparse reads "-1,0,0.2" as an option; rewrite "--flag -1,0" as "--flag=-1,0"
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMERIC_LIST.fullmatch(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.n is not None and args.n < 0:
        print("error: --n must be nonnegative", file=sys.stderr)
        return EXIT_INVALID
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", StabilityAdvisory)
            args.func(args)
        for w in caught:
            if issubclass(w.category, StabilityAdvisory):
                print(f"advisory: {w.message}", file=sys.stderr)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FracThetaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main():  # pragma: no cover
    sys.exit(run())

