"""Command-line driver: solve, convergence studies, and problem generation.

Emits deterministic CSV (17 significant digits) plus gnuplot-ready scripts
for convergence studies. Exit codes: 0 success, 2 usage/input error,
3 tolerance unreached.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import problems, solver
from .linalg import save_vector
from .reference import dense_cap, dense_solution
from .toeplitz import heuristic_gamma

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOL_UNREACHED = 3


class InputError(Exception):
    """User-facing input problem; reported on stderr with exit code 2."""


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.16e}{x.imag:+.16e}i"
    return f"{float(x):.16e}"


def _parse_scalar(token: str):
    token = token.strip()
    try:
        if "i" in token or "j" in token:
            return complex(token.replace("i", "j"))
        return float(token)
    except ValueError as exc:
        raise InputError(f"cannot parse scalar '{token}'") from exc


def _parse_list(text: str) -> list:
    values = [_parse_scalar(tok) for tok in text.split(",") if tok.strip()]
    if not values:
        raise InputError("empty value list")
    return values


def _load_problem(args):
    if args.manifest:
        try:
            return problems.load_manifest(args.manifest)
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot load manifest: {exc}") from exc
    if not args.problem:
        raise InputError("either --problem or --manifest is required")
    params = {"n": args.n, "a": args.a, "b": args.b,
              "points": args.points, "gamma1": args.gamma1}
    params = {k: v for k, v in params.items() if v is not None}
    try:
        return problems.generate(args.problem, params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=sorted(problems.GENERATORS),
                   help="built-in problem name")
    p.add_argument("--manifest", help="JSON manifest of a file-based problem")
    p.add_argument("--n", type=int, help="grid size (advdiff problems)")
    p.add_argument("--a", type=float, help="diffusion parameter")
    p.add_argument("--b", type=float, help="feedback parameter (advdiff2)")
    p.add_argument("--points", type=int, help="points per dimension (wave)")
    p.add_argument("--gamma1", type=float, help="fixed damping parameter (wave)")


def _add_scaling_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", help="override scaling parameter(s), comma separated")
    p.add_argument("--no-scaling", action="store_true",
                   help="disable coefficient scaling")


def _write_lines(path, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_solve(args) -> int:
    P, u0 = _load_problem(args)
    if args.t is None:
        raise InputError("--t is required")
    ts = [float(v.real) if isinstance(v, complex) else v for v in _parse_list(args.t)]
    epss = _parse_list(args.eps) if args.eps else [0.0]
    targets = [(t, e) for t in ts for e in epss]
    gamma = float(_parse_list(args.gamma)[0].real) if args.gamma else None
    use_scaling = not args.no_scaling

    if args.tol is not None:
        result = solver.solve_adaptive(
            P, u0, targets, tol=args.tol, p_max=args.p_max,
            use_scaling=use_scaling, gamma=gamma,
            check_interval=args.check_interval)
        S, reports = result.solution, result.reports
        converged = result.converged
    elif args.p is not None:
        S = solver.build(P, u0, args.p, use_scaling=use_scaling, gamma=gamma)
        reports = [S.error_report(t, e) for t, e in targets]
        converged = True
    else:
        raise InputError("either --tol or --p is required")

    lines = ["t,eps,p_used,aposteriori_estimate,apriori_total"]
    for r in reports:
        lines.append(",".join([
            _fmt(r.t), _fmt(r.eps), str(S.p),
            _fmt(r.total_estimate), _fmt(r.apriori_total),
        ]))
    _write_lines(args.out, lines)

    if args.save_solutions:
        import os
        os.makedirs(args.save_solutions, exist_ok=True)
        for idx, (t, e) in enumerate(targets):
            u = S.evaluate(t, e)
            save_vector(os.path.join(args.save_solutions, f"solution_{idx:03d}.mtx"), u)

    if not converged:
        print(f"tolerance not reached at p_max={S.p}", file=sys.stderr)
        return EXIT_TOL_UNREACHED
    return EXIT_OK


def _convergence_rows(P, u0, t, epss, p_max, gamma, use_scaling, self_reference):
    S_ref = solver.build(P, u0, p_max + 10, use_scaling=use_scaling, gamma=gamma)
    if self_reference or P.dim > dense_cap():
        refs = {e: S_ref.evaluate(t, e) for e in epss}
    else:
        refs = {e: dense_solution(P, u0, t, e) for e in epss}

    rows = []
    for p in range(1, p_max + 1):
        S = S_ref.with_p(p)
        for e in epss:
            err = float(np.linalg.norm(S.evaluate(t, e) - refs[e]))
            r = S.error_report(t, e)
            rows.append((p, e, err, r.total_estimate, r.apriori_total))
    return rows


def cmd_convergence(args) -> int:
    P, u0 = _load_problem(args)
    if args.t is None:
        raise InputError("--t is required")
    ts = _parse_list(args.t)
    if len(ts) != 1:
        raise InputError("convergence studies take exactly one --t value")
    t = float(ts[0].real) if isinstance(ts[0], complex) else ts[0]
    epss = _parse_list(args.eps) if args.eps else [0.0]
    use_scaling = not args.no_scaling
    gammas = ([float(v.real) for v in _parse_list(args.gamma)]
              if args.gamma else [None])

    header = "p,eps,true_error,aposteriori_estimate,apriori_total"
    outputs = []
    for gi, gamma in enumerate(gammas):
        rows = _convergence_rows(P, u0, t, epss, args.p_max, gamma,
                                 use_scaling, args.self_reference)
        lines = [header]
        for p, e, err, est, bound in rows:
            lines.append(",".join([str(p), _fmt(e), _fmt(err), _fmt(est), _fmt(bound)]))
        if args.out is None or len(gammas) == 1:
            path = args.out
        else:
            stem, dot, suffix = args.out.rpartition(".")
            path = f"{stem}_g{gi}{dot}{suffix}" if dot else f"{args.out}_g{gi}"
        _write_lines(path, lines)
        if path is not None:
            outputs.append(path)

    if outputs:
        gp = [
            "set datafile separator ','",
            "set logscale y",
            "set xlabel 'iteration p'",
            "set ylabel '2-norm error'",
            "set key outside",
            "plot \\",
        ]
        plot_parts = []
        for path in outputs:
            plot_parts.append(
                f"  '{path}' using 1:3 with linespoints title '{path} error', \\\n"
                f"  '{path}' using 1:4 with lines title '{path} estimate'"
            )
        gp.append(", \\\n".join(plot_parts))
        script = outputs[0].rsplit(".", 1)[0] + ".gp"
        _write_lines(script, gp)
    return EXIT_OK


def cmd_generate(args) -> int:
    if not args.problem:
        raise InputError("--problem is required")
    if not args.out:
        raise InputError("--out is required")
    params = {"n": args.n, "a": args.a, "b": args.b,
              "points": args.points, "gamma1": args.gamma1}
    params = {k: v for k, v in params.items() if v is not None}
    try:
        P, u0 = problems.generate(args.problem, params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        manifest = problems.write_problem(args.out, args.problem, P, u0, params)
    except OSError as exc:
        raise InputError(f"cannot write output: {exc}") from exc
    print(manifest)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paramexpmv",
        description="Parameterized linear-ODE solver with adaptive Krylov iteration",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve at (t, eps) targets")
    _add_problem_args(ps)
    _add_scaling_args(ps)
    ps.add_argument("--t", help="comma-separated time values")
    ps.add_argument("--eps", help="comma-separated parameter values (a+bi for complex)")
    ps.add_argument("--tol", type=float, help="adaptive tolerance")
    ps.add_argument("--p", type=int, help="fixed iteration count")
    ps.add_argument("--p-max", type=int, default=200, help="iteration cap")
    ps.add_argument("--check-interval", type=int, default=5,
                    help="steps between estimate checks")
    ps.add_argument("--out", help="CSV output path (default stdout)")
    ps.add_argument("--save-solutions", help="directory for solution vectors")
    ps.set_defaults(func=cmd_solve)

    pc = sub.add_parser("convergence", help="error/estimate table over p")
    _add_problem_args(pc)
    _add_scaling_args(pc)
    pc.add_argument("--t", help="time value")
    pc.add_argument("--eps", help="comma-separated parameter values")
    pc.add_argument("--p-max", type=int, default=60, help="largest iteration count")
    pc.add_argument("--self-reference", action="store_true",
                    help="use a deeper run as reference instead of the dense oracle")
    pc.add_argument("--out", help="CSV output path (default stdout)")
    pc.set_defaults(func=cmd_convergence)

    pg = sub.add_parser("generate", help="write a built-in problem to files")
    _add_problem_args(pg)
    pg.add_argument("--out", help="output directory")
    pg.set_defaults(func=cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry_point() -> None:
    sys.exit(main())
