"""``schurloss`` command-line tool.

Exit codes: 0 success, 1 usage error, 2 invalid input (including a function
outside the requested chart), 3 numerical check failed.
"""

import argparse
import json
import sys

import numpy as np

from . import canonical, fileio, realization, schur
from .errors import NumericalError, SchurLossError, ValidationError
from .lft import interpolation_value
from .matnum import ToleranceProfile, norm2, unitarity_residual

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CheckFailed(SchurLossError):
    """A command ran but its verdict is negative; carries the full report."""

    def __init__(self, message, report, code=EXIT_NUMERICAL):
        super().__init__(message)
        self.report = report
        self.code = code


def _cnum(z):
    return [float(np.real(z)), float(np.imag(z))]


def _cmat(a):
    return [[_cnum(x) for x in row] for row in np.asarray(a)]


def _tol(args):
    kw = {}
    for name in ("tol_unitary", "tol_rank", "tol_roundtrip"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = val
    return ToleranceProfile(**kw)


def _chart_for(chart_arg, n, p):
    if chart_arg in (None, "default"):
        return schur.default_chart(n, p)
    if chart_arg == "default-fixed":
        return schur.default_chart(n, p, base=schur.FIXED)
    return fileio.load_chart(chart_arg)


# -- subcommands -------------------------------------------------------------

def cmd_generate(args, tol):
    g = realization.random_lossless(args.degree, args.size, args.seed)
    cert = realization.is_lossless(g, tol)
    if args.output:
        fileio.save_realization(args.output, g, {"lossless_balanced": True})
    return {"n": g.n, "p": g.p, "seed": args.seed, "output": args.output, **cert.as_dict()}


def cmd_check(args, tol):
    g, tags = fileio.load_realization(args.file)
    cert = realization.is_lossless(g, tol)
    report = {"n": g.n, "p": g.p, "m": g.m, "tags": tags, **cert.as_dict()}
    ok = cert.passes(tol)
    if tags.get("lossless_balanced"):
        ok = ok and cert.raw_unitarity_residual <= tol.tol_unitary
    if ok:
        try:
            report["winding_degree"] = realization.winding_degree(g, tol)
            ok = report["winding_degree"] == g.n
        except SchurLossError as exc:
            report["winding_degree"] = None
            report["winding_error"] = str(exc)
            ok = False
    report["lossless"] = ok
    if not ok:
        raise CheckFailed("realization failed the losslessness check", report)
    return report


def cmd_gramians(args, tol):
    g, _ = fileio.load_realization(args.file)
    gp = realization.gramians(g, tol)
    hsv = realization.hankel_singular_values(g, tol)
    ah = g.A.conj().T
    return {
        "n": g.n,
        "Wc": _cmat(gp.Wc),
        "Wo": _cmat(gp.Wo),
        "stein_residual_c": float(np.linalg.norm(gp.Wc - g.A @ gp.Wc @ ah - g.B @ g.B.conj().T)) if g.n else 0.0,
        "stein_residual_o": float(np.linalg.norm(gp.Wo - ah @ gp.Wo @ g.A - g.C.conj().T @ g.C)) if g.n else 0.0,
        "hankel_singular_values": [float(x) for x in hsv],
        "numerical_rank": int(np.sum(hsv > tol.tol_rank * max(1.0, hsv[0] if hsv.size else 0.0))),
    }


def cmd_balance(args, tol):
    g, _ = fileio.load_realization(args.file)
    out = realization.balance_lossless(g, tol)
    if args.output:
        fileio.save_realization(args.output, out, {"lossless_balanced": True})
    gp = realization.gramians(out, tol)
    return {
        "n": out.n,
        "unitarity_residual": unitarity_residual(out.matrix),
        "gramian_residual": max(norm2(gp.Wc - np.eye(out.n)), norm2(gp.Wo - np.eye(out.n))),
        "output": args.output,
    }


def _parse_point(s):
    if s.strip().lower() in ("inf", "infinity", "oo"):
        return np.inf
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise ValidationError(f"cannot parse evaluation point {s!r}") from None


def cmd_eval(args, tol):
    g, _ = fileio.load_realization(args.file)
    values = []
    for s in args.z:
        z = _parse_point(s)
        values.append({"z": "inf" if np.isinf(z) else _cnum(z), "value": _cmat(realization.evaluate(g, z, tol))})
    return {"values": values}


def cmd_schur_encode(args, tol):
    g, _ = fileio.load_realization(args.file)
    chart = _chart_for(args.chart, g.n, g.p)
    data = schur.schur_decompose(g, chart, tol)
    rec = schur.schur_reconstruct(data, tol)
    pts = realization.circle_points(32)
    err = _max_error(g, rec, pts, tol)
    if args.output:
        fileio.save_schur_data(args.output, data)
    return {
        "n": data.n,
        "p": data.p,
        "schur_vector_norms": [float(np.linalg.norm(v)) for v in data.v],
        "roundtrip_error": err,
        "output": args.output,
    }


def cmd_schur_decode(args, tol):
    data = fileio.load_schur_data(args.file)
    iterates = schur.schur_iterates(data, tol)
    interp = 0.0
    for g, (w, u), v in zip(iterates[1:], data.chart.steps, data.v):
        interp = max(interp, float(np.linalg.norm(interpolation_value(g, u, w, tol) - v)))
    g = iterates[-1]
    if args.output:
        fileio.save_realization(args.output, g, {"lossless_balanced": True})
    return {
        "n": g.n,
        "p": g.p,
        "unitarity_residual": unitarity_residual(g.matrix),
        "interpolation_residual": interp,
        "output": args.output,
    }


def cmd_chart_test(args, tol):
    g, _ = fileio.load_realization(args.file)
    chart = _chart_for(args.chart, g.n, g.p)
    report = schur.chart_contains(g, chart, tol).as_dict()
    if not report["in_chart"]:
        raise CheckFailed(f"not in chart (failure step {report['failure_step']})", report, EXIT_INVALID)
    return report


def _canonical(args, tol, which):
    g, _ = fileio.load_realization(args.file)
    size = g.p if which == "output-normal" else g.m
    chart = _chart_for(args.chart, g.n, size)
    fn = canonical.output_normal_form if which == "output-normal" else canonical.input_normal_form
    out, t = fn(canonical.StableSystem(g), chart, tol)
    if args.output:
        fileio.save_realization(args.output, out)
    gp = realization.gramians(out, tol)
    eye = np.eye(out.n)
    pts = realization.circle_points(16)
    return {
        "n": out.n,
        "form": which,
        "gramian_residual": norm2((gp.Wo if which == "output-normal" else gp.Wc) - eye),
        "transfer_error": _max_error(g, out, pts, tol),
        "T": _cmat(t),
        "output": args.output,
    }


def _max_error(g1, g2, pts, tol):
    v1 = realization.evaluate_many(g1, pts, tol)
    v2 = realization.evaluate_many(g2, pts, tol)
    return float(max(np.linalg.norm(a - b, 2) for a, b in zip(v1, v2))) if len(pts) else 0.0


def cmd_compare(args, tol):
    g1, _ = fileio.load_realization(args.first)
    g2, _ = fileio.load_realization(args.second)
    if (g1.p, g1.m) != (g2.p, g2.m):
        raise ValidationError(f"sizes differ: {g1.p}x{g1.m} vs {g2.p}x{g2.m}")
    err = _max_error(g1, g2, realization.circle_points(args.points), tol)
    report = {"points": args.points, "max_error": err, "tol_roundtrip": tol.tol_roundtrip, "match": err <= tol.tol_roundtrip}
    if not report["match"]:
        raise CheckFailed(f"transfer functions differ by {err:.3e}", report)
    return report


# -- parser --------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report on stdout")
    common.add_argument("--tol-unitary", type=float, metavar="X")
    common.add_argument("--tol-rank", type=float, metavar="X")
    common.add_argument("--tol-roundtrip", type=float, metavar="X")
    common.add_argument("--seed", type=int, default=0, metavar="N")
    common.add_argument("-o", "--output", metavar="PATH")

    parser = _Parser(prog="schurloss", description="Balanced realizations of lossless systems and the tangential Schur algorithm.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="random lossless-balanced realization")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=cmd_generate)

    for name, func, helptext in (
        ("check", cmd_check, "certify losslessness"),
        ("gramians", cmd_gramians, "controllability and observability Gramians"),
        ("balance", cmd_balance, "balance a minimal lossless realization"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.set_defaults(func=func, report_file=name != "balance")

    p = sub.add_parser("eval", parents=[common], help="evaluate the transfer matrix")
    p.add_argument("file")
    p.add_argument("--z", action="append", required=True, help="point such as 0.5+1j or inf (repeatable)")
    p.set_defaults(func=cmd_eval, report_file=True)

    p = sub.add_parser("schur", help="Schur chart coordinates")
    ssub = p.add_subparsers(dest="schur_command", required=True, parser_class=_Parser)
    q = ssub.add_parser("encode", parents=[common], help="realization to Schur data")
    q.add_argument("file")
    q.add_argument("--chart", default="default", help="'default', 'default-fixed' or a chart file")
    q.set_defaults(func=cmd_schur_encode)
    q = ssub.add_parser("decode", parents=[common], help="Schur data to realization")
    q.add_argument("file")
    q.set_defaults(func=cmd_schur_decode)

    p = sub.add_parser("chart-test", parents=[common], help="chart membership report")
    p.add_argument("file")
    p.add_argument("--chart", default="default")
    p.set_defaults(func=cmd_chart_test, report_file=True)

    p = sub.add_parser("canonical", help="canonical forms of stable systems")
    csub = p.add_subparsers(dest="canonical_command", required=True, parser_class=_Parser)
    for which in ("output-normal", "input-normal"):
        q = csub.add_parser(which, parents=[common])
        q.add_argument("file")
        q.add_argument("--chart", default="default")
        q.set_defaults(func=lambda a, t, w=which: _canonical(a, t, w))

    p = sub.add_parser("compare", parents=[common], help="max transfer-function difference on the circle")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--points", type=int, default=32)
    p.set_defaults(func=cmd_compare, report_file=True)
    return parser


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    width = max((len(k) for k in report), default=0)
    for key, val in report.items():
        if isinstance(val, (list, dict)) and len(json.dumps(val)) > 60:
            val = json.dumps(val)[:57] + "..."
        print(f"{key:<{width}}  {val}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tol(args)
    except ValidationError as exc:
        parser.error(str(exc))
    try:
        report = args.func(args, tol)
        code = EXIT_OK
        report = {"status": "ok", **report}
    except CheckFailed as exc:
        report = {"status": "failed", "error": str(exc), **exc.report}
        code = exc.code
    except ValidationError as exc:
        report = {"status": "invalid", "error_type": type(exc).__name__, "error": str(exc)}
        code = EXIT_INVALID
    except NumericalError as exc:
        report = {"status": "numerical_failure", "error_type": type(exc).__name__, "error": str(exc)}
        code = EXIT_NUMERICAL
    except OSError as exc:
        report = {"status": "invalid", "error_type": "OSError", "error": str(exc)}
        code = EXIT_INVALID
    if args.output and getattr(args, "report_file", False):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    _emit(report, args.json)
    if code != EXIT_OK and not args.json:
        print(f"schurloss: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
