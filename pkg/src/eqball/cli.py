"""Command-line front end with machine-readable JSON/CSV output.

Exit codes: 0 success (or falsifier consistent / certificate accepted),
2 input or parse error, 3 falsifier found a disproof, 4 certificate
rejected.

Weight expressions use the grammar of eqball.expr: coordinates x1..xn, the
point `x` inside norm(x) / dot(x, x), functions sqrt and abs, binary
+ - * /, decimal literals.  Example: "dot(x,x) - 0.5*norm(x) + 1".
"""
from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import math
import sys

import numpy as np

from .certify import (
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    generate_equality_certificate,
    _dumps,
)
from .enlarge import enlarge_to_maximal
from .errors import EqBallError, ExpressionError
from .expr import compile_weight_expression
from .geometry import DEFAULT_TOL, Frame, Tolerance
from .simplex import EquilateralSet, alpha, beta
from .verify import run_verification_suites
from .weights import WeightFn, eta, falsify, lambda_shell, nu, shell_circuit
from . import __version__


def _tolerance(args) -> Tolerance:
    if getattr(args, "eps", None):
        return Tolerance(eps_eq=args.eps, eps_rank=DEFAULT_TOL.eps_rank,
                         grid_step=DEFAULT_TOL.grid_step)
    return DEFAULT_TOL


def _emit(args, payload: dict, text: str | None = None) -> None:
    """Write JSON (or raw text) to stdout and optionally to --out."""
    if text is None:
        if not getattr(args, "no_timestamp", False):
            payload = dict(payload)
            payload["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        text = _dumps(payload)
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if not getattr(args, "quiet", False):
        print(text)


def _parse_point(text: str) -> np.ndarray:
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    return np.asarray(values, dtype=float)


def cmd_constants(args) -> int:
    n = args.n
    if n < 2:
        print("error: ball-geometry commands require n >= 2 (the unit-ball result "
              "starts at dimension 2)", file=sys.stderr)
        return 2
    betas = {str(k): beta(k) for k in range(1, n + 3)}
    alphas = {str(k): alpha(k) for k in range(2, n + 3)}
    bnext = beta(n + 1)
    payload = {
        "n": n,
        "beta": betas,
        "alpha": alphas,
        "beta_fixed_point_residual": abs(eta(n, bnext) - bnext),
        "lambda_n": lambda_shell(n),
        "nu_at_lambda": nu(n, lambda_shell(n)),
    }
    _emit(args, payload)
    return 0


def cmd_enlarge(args) -> int:
    tol = _tolerance(args)
    pts = None
    try:
        with open(args.input, encoding="utf-8") as fh:
            coords = json.load(fh)
        pts = np.asarray(coords, dtype=float)
        if pts.ndim != 2:
            raise EqBallError("points file must hold an array of coordinate arrays")
        s = EquilateralSet(pts)
        s.validate(in_ball=True, tol=tol)
    except (OSError, ValueError, json.JSONDecodeError, EqBallError) as exc:
        detail = _name_worst_violation(pts) if isinstance(pts, np.ndarray) and pts.ndim == 2 else ""
        print(f"error: invalid input set: {exc}{detail}", file=sys.stderr)
        return 2
    final, trace = enlarge_to_maximal(s, tol)
    payload = {
        "n": final.n,
        "input_size": s.k,
        "final_size": final.k,
        "points": [[float(c) for c in p] for p in final.points],
        "trace": [
            {"k": st.k, "subspace_dim": st.subspace_dim,
             "a": [float(c) for c in st.a],
             "u": [float(c) for c in st.u],
             "new_point": [float(c) for c in st.new_point]}
            for st in trace.steps
        ],
        "verification": {
            "max_pairwise_distance_error": final.pairwise_distance_error(),
            "max_norm": final.max_norm(),
        },
    }
    _emit(args, payload)
    return 0


def _name_worst_violation(pts: np.ndarray) -> str:
    worst = ""
    worst_err = 0.0
    k = pts.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            err = abs(float(np.linalg.norm(pts[i] - pts[j])) - 1.0)
            if err > worst_err:
                worst_err = err
                worst = f" (worst pair ({i}, {j}) distance error {err:.3e})"
    norms = np.linalg.norm(pts, axis=1)
    if norms.size and float(norms.max()) - 1.0 > worst_err:
        worst = f" (worst norm: point {int(norms.argmax())} has norm {float(norms.max()):.12f})"
    return worst


def cmd_falsify(args) -> int:
    if args.n < 2:
        print("error: falsify requires n >= 2", file=sys.stderr)
        return 2
    try:
        evaluator = compile_weight_expression(args.expr, args.n)
    except ExpressionError as exc:
        print(f"error: cannot parse expression: {exc}", file=sys.stderr)
        return 2
    fn = WeightFn(evaluator=evaluator, domain_mode=args.mode)
    report = falsify(fn, args.n, args.samples, args.seed, threshold=args.threshold,
                     tol=_tolerance(args))
    payload = {
        "expression": args.expr,
        "n": args.n,
        "samples": args.samples,
        "seed": args.seed,
        "mode": args.mode,
        "spread": report.spread,
        "empirical_weight": report.empirical_weight,
        "verdict": report.verdict,
        "witness_high": [[float(c) for c in p] for p in report.witness_high],
        "witness_low": [[float(c) for c in p] for p in report.witness_low],
        "witness_indices": list(report.witness_indices),
    }
    _emit(args, payload)
    return 3 if report.verdict == "disproved" else 0


def cmd_certify(args) -> int:
    tol = _tolerance(args)
    try:
        x = _parse_point(args.x)
        y = _parse_point(args.y)
        n = args.n if args.n else x.size
        cert = generate_equality_certificate(x, y, n, tol)
    except (ValueError, json.JSONDecodeError, EqBallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = certificate_to_json(cert, tol)
    _emit(args, {}, text=text)
    if not getattr(args, "quiet", False):
        print(f"sets={len(cert.sets)} points={cert.points.shape[0]}", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    tol = _tolerance(args)
    try:
        with open(args.input, encoding="utf-8") as fh:
            cert = certificate_from_json(fh.read())
    except (OSError, EqBallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = check_certificate(cert, tol)
    payload = {
        "accepted": report.accepted,
        "failure": report.failure,
        "residual": report.residual,
        "detail": report.detail,
        "sets": report.set_count,
        "points": report.point_count,
    }
    _emit(args, payload)
    return 0 if report.accepted else 4


def cmd_emit_circuit(args) -> int:
    if args.n < 2:
        print("error: emit-circuit requires n >= 2", file=sys.stderr)
        return 2
    section = Frame(np.eye(2, args.n))
    plan = shell_circuit(args.n, section, args.angle)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["label", "cx", "cy", "radius", "theta_start", "theta_end"])
    writer.writerow(["D", "0", "0", "1", "0", format(2 * math.pi, ".17g")])
    for arc in plan.arcs:
        writer.writerow([arc.label,
                         format(arc.center[0], ".17g"), format(arc.center[1], ".17g"),
                         format(arc.radius, ".17g"),
                         format(arc.theta_start, ".17g"), format(arc.theta_end, ".17g")])
    for name, pt in sorted(plan.corners_local.items()):
        writer.writerow([name, format(pt[0], ".17g"), format(pt[1], ".17g"), "0", "0", "0"])
    _emit(args, {}, text=buf.getvalue().rstrip("\n"))
    return 0


def cmd_verify_all(args) -> int:
    n_values = list(range(args.n_min, args.n_max + 1))
    results = run_verification_suites(n_values, seed=args.seed)
    payload = {
        "suites": [
            {"name": r.name, "passed": r.passed, "count": r.count,
             "worst_slack": r.worst_slack, "note": r.note}
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    _emit(args, payload)
    return 0 if payload["all_passed"] else 1


def _add_common(parser, out=True):
    parser.add_argument("--quiet", action="store_true", help="suppress stdout output")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp field for byte-identical reruns")
    parser.add_argument("--eps", type=float, default=None,
                        help="override the distance-equality tolerance")
    if out:
        parser.add_argument("--out", default=None, help="also write the output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqball",
        description="Equilateral sets in the unit ball: constants, enlargement, "
                    "weight falsification, equality certificates.",
        epilog="Weight expression grammar: coordinates x1..xn; the point x inside "
               "norm(x) and dot(x,x); sqrt(s), abs(s); operators + - * /; decimal "
               "literals.",
    )
    parser.add_argument("--version", action="version", version=f"eqball {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="closed-form constants and fixed-point residual")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("enlarge", help="enlarge an in-ball equilateral set to size n+1")
    p.add_argument("--input", required=True, help="JSON file: array of coordinate arrays")
    _add_common(p)
    p.set_defaults(func=cmd_enlarge)

    p = sub.add_parser("falsify", help="probe a candidate weight expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["ball", "sphere"], default="ball")
    p.add_argument("--threshold", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("certify", help="generate an equality certificate for two points")
    p.add_argument("--x", required=True, help="comma-separated or JSON coordinates")
    p.add_argument("--y", required=True)
    p.add_argument("--n", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check", help="verify a certificate file")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("emit-circuit", help="CSV of the annulus circuit (plot-ready)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--angle", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=cmd_emit_circuit)

    p = sub.add_parser("verify-all", help="run every guaranteed-property suite")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EqBallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
