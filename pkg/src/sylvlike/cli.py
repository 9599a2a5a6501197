"""JSON command-line front end: ``python3 -m sylvlike <command>``.

Commands
--------
analyze FILE   sufficient-condition report for a problem file
solve FILE     solve a problem file (``--method auto|kron|reduction|closed-form``)
gen            print a seeded random problem file
laurent FILE   Laurent coefficients of ``D - l E`` from {"D", "E", "kmax"?}
qep FILE       palindromic pipeline on {"A2", "A1", "operator", "x0"?, ...}

Exit codes
----------
0 success / condition holds
1 malformed input (bad JSON, shapes, non-palindromic data)
2 condition fails but the equation is still uniquely solvable
3 not uniquely solvable (or singular pencil for ``laurent``)
4 residual gate failed
5 Newton iteration did not converge

Every report carries the ``seed`` it was produced with.
"""

import argparse
import json
import sys

import numpy as np

from .errors import (DimensionMismatch, MissingCoefficient, NewtonStepSingular,
                     NotConverged, NotPalindromic, NotUniquelySolvable,
                     ResidualCheckFailed, SingularPencil, SylvesterError)
from .generate import PROBLEM_KINDS, random_problem
from .matrix_core import VERIFY_TOL, as_square, matrix_from_json, matrix_to_json
from .palindromic import (build_z, check_pairing, make_qep, newton_riccati,
                          qep_det, qep_eigenvalues, qep_eigs_from_riccati,
                          riccati_residual)
from .pencil_lab import laurent_coefficients, relative_charpoly
from .solvers import Problem, analyze, solve
from .structured_ops import KINDS, operator_from_json, operator_to_json

__all__ = ["main", "problem_from_json", "problem_to_json", "exit_code_for"]

EXIT_OK, EXIT_PARSE, EXIT_FAILS, EXIT_SINGULAR, EXIT_RESIDUAL, EXIT_NEWTON = range(6)


class InputError(Exception):
    pass


def problem_from_json(obj):
    """Parse a problem file; dimension agreement is enforced."""
    if not isinstance(obj, dict):
        raise InputError("problem must be a JSON object")
    try:
        mats = {k: matrix_from_json(obj[k], k) for k in "ABC"}
        for k in "DE":
            if obj.get(k) is not None:
                mats[k] = matrix_from_json(obj[k], k)
        f = operator_from_json(obj["operator"], mats["A"].shape[0])
        return Problem(f=f, **mats)
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def problem_to_json(p):
    out = {k: matrix_to_json(getattr(p, k)) for k in "ABC"}
    for k in "DE":
        if getattr(p, k) is not None:
            out[k] = matrix_to_json(getattr(p, k))
    out["operator"] = operator_to_json(p.f)
    return out


def _value(z):
    z = complex(z)
    if not np.isfinite(z):
        return "inf"
    return [z.real, z.imag]


def _pair_values(pairs):
    a, b = pairs[:, 0], pairs[:, 1]
    return [_value(np.inf if abs(bi) <= 1e-14 * abs(ai) else ai / bi)
            for ai, bi in zip(a, b)]


def exit_code_for(report):
    """Exit code of ``analyze`` as a function of the report fields."""
    if not report.kron_nonsingular:
        return EXIT_SINGULAR
    return EXIT_OK if report.holds else EXIT_FAILS


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def cmd_analyze(args):
    p = problem_from_json(_load(args.file))
    report = analyze(p, tol=args.tol)
    return exit_code_for(report), report.to_dict()


def cmd_solve(args):
    p = problem_from_json(_load(args.file))
    try:
        rep = solve(p, method=args.method, verify_tol=args.tol)
    except NotUniquelySolvable as exc:
        return EXIT_SINGULAR, {"error": str(exc), "sigma_min": float(exc.sigma_min)}
    except ResidualCheckFailed as exc:
        return EXIT_RESIDUAL, {"error": str(exc), "residual": float(exc.residual)}
    except SylvesterError as exc:
        return EXIT_SINGULAR, {"error": f"{type(exc).__name__}: {exc}"}
    out = rep.to_dict()
    if not rep.residual <= args.tol:
        out["error"] = f"residual {rep.residual:.3e} above {args.tol:.1e}"
        return EXIT_RESIDUAL, out
    return EXIT_OK, out


def cmd_gen(args):
    p = random_problem(args.m, args.kind, args.operator, seed=args.seed)
    return EXIT_OK, problem_to_json(p)


def cmd_laurent(args):
    obj = _load(args.file)
    try:
        D = as_square(matrix_from_json(obj["D"], "D"), "D")
        E = as_square(matrix_from_json(obj["E"], "E"), "E")
        kmax = obj.get("kmax")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if D.shape != E.shape:
        raise InputError(f"D is {D.shape} but E is {E.shape}")
    try:
        lx = laurent_coefficients(D, E, kmax=kmax)
    except SingularPencil as exc:
        return EXIT_SINGULAR, {"error": str(exc)}
    p = relative_charpoly(D, E)
    return EXIT_OK, {
        "mu": lx.mu,
        "kmax": lx.kmax,
        "radius": lx.radius,
        "nodes": lx.nodes,
        "recurrence_residual": lx.residual,
        "charpoly": [_value(c) for c in p.coeffs],
        "coefficients": {str(k): matrix_to_json(lx.U(k))
                         for k in range(-lx.mu, lx.kmax + 1)},
    }


def _qep_residuals(q, pairs):
    vals = [v for v in _pair_values(pairs) if v != "inf"]
    worst = 0.0
    for v in vals:
        lam = complex(*v)
        scale = (np.linalg.norm(q.A2) * abs(lam) ** 2 + np.linalg.norm(q.A1)
                 * abs(lam) + np.linalg.norm(q.A0)) ** q.m
        worst = max(worst, abs(qep_det(q, lam)) / scale)
    return worst


def cmd_qep(args):
    obj = _load(args.file)
    try:
        A2 = matrix_from_json(obj["A2"], "A2")
        A1 = matrix_from_json(obj["A1"], "A1")
        f = operator_from_json(obj["operator"], A2.shape[0])
        x0 = obj.get("x0")
        x0 = None if x0 is None else matrix_from_json(x0, "x0")
        tol = float(obj.get("tol", 1e-12))
        maxit = int(obj.get("maxit", 50))
        q = make_qep(A2, A1, f)
    except NotPalindromic as exc:
        raise InputError(f"NotPalindromic: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    blocks = build_z(q)
    out = {}
    try:
        trace = newton_riccati(blocks, f, x0, tol=tol, maxit=maxit)
    except (NotConverged, NewtonStepSingular) as exc:
        # report the spectrum from a plain linearization alongside the trace
        eigs = qep_eigenvalues(q)
        pairing = check_pairing(eigs, f)
        out.update(error=f"{type(exc).__name__}: {exc}",
                   newton_trace=exc.trace.to_dict() if exc.trace else None,
                   eigenvalues=_pair_values(eigs),
                   pairs=[[_value(a), _value(b)] for a, b in pairing.pairs],
                   unmatched=[_value(u) for u in pairing.unmatched])
        return EXIT_NEWTON, out
    first, second = qep_eigs_from_riccati(blocks, trace.X, f)
    eigs = np.vstack([first, second])
    pairing = check_pairing(eigs, f)
    out.update(
        X=matrix_to_json(trace.X),
        eigenvalues=_pair_values(eigs),
        pairs=[[_value(a), _value(b)] for a, b in pairing.pairs],
        unmatched=[_value(u) for u in pairing.unmatched],
        newton_trace=trace.to_dict(),
        residuals={
            "riccati": float(np.linalg.norm(riccati_residual(trace.X, blocks, f))),
            "det_q": _qep_residuals(q, eigs),
        })
    return EXIT_OK, out


def _add_globals(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=d(VERIFY_TOL),
                        help="tolerance (default 1e-8)")
    parser.add_argument("--seed", type=int, default=d(0),
                        help="random seed, recorded in every report")
    parser.add_argument("--output", default=d("-"),
                        help="output path (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="python3 -m sylvlike",
        description="Analyze and solve A X D + E f(X) B = C.")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="sufficient-condition report")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("file")
    p.add_argument("--method", default="auto",
                   choices=["auto", "kron", "reduction", "closed-form"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="seeded random problem")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--kind", default="generic", choices=PROBLEM_KINDS)
    p.add_argument("--operator", default="identity", choices=KINDS)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("laurent", help="Laurent coefficients of D - l E")
    p.add_argument("file")
    p.set_defaults(func=cmd_laurent)

    p = sub.add_parser("qep", help="palindromic Riccati/Newton pipeline")
    p.add_argument("file")
    p.set_defaults(func=cmd_qep)

    for name in ("analyze", "solve", "gen", "laurent", "qep"):
        _add_globals(sub.choices[name], suppress=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.tol > 0:
        parser.error("--tol must be positive")
    try:
        code, out = args.func(args)
    except (InputError, DimensionMismatch, MissingCoefficient) as exc:
        code, out = EXIT_PARSE, {"error": str(exc)}
    out["seed"] = args.seed
    text = json.dumps(out, indent=2)
    if args.output == "-":
        print(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    if code == EXIT_PARSE:
        print(f"error: {out['error']}", file=sys.stderr)
    return code
