"""Command-line front end: solve, verify, and convergence subcommands.

Exit codes: 0 on success (all checks PASS), 1 on a verification failure or a
failed solve, 2 on usage or configuration errors.  Output files are
deterministic: repeated runs produce byte-identical CSV/JSON.  The
environment variable GALERKIN_TIME_TOL (default 1.0) scales every
verification tolerance.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import polybasis
from .analysis import (
    NORMS,
    check_coincidence,
    convergence_study,
    error_summary,
)
from .errors import ConfigError, GalerkinTimeError, ProblemError, SolverError
from .mesh import geometric, uniform
from .postprocess import (
    check_continuity,
    check_galerkin_identity,
    postprocess,
    stabilization_functional,
    stabilization_integral,
)
from .problem import corpus_names, get_problem, load_problem_file
from .reporting import (
    convergence_csv,
    convergence_json,
    solution_samples_csv,
)
from .solvers import SolverConfig, assemble_element_residual, solve_cg, solve_dg


def _tol_scale() -> float:
    raw = os.environ.get("GALERKIN_TIME_TOL", "1.0")
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"GALERKIN_TIME_TOL must be a float, got {raw!r}")
    if not value > 0:
        raise ConfigError(f"GALERKIN_TIME_TOL must be positive, got {value}")
    return value


def _add_problem_args(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--problem", help="built-in problem name")
    group.add_argument("--problem-file", help="path to a JSON problem descriptor")
    sub.add_argument("--T", type=float, default=None, help="horizon override")


def _add_solver_args(sub):
    sub.add_argument("--k", type=int, required=True, help="DG degree (CG uses k+1)")
    sub.add_argument(
        "--rhs-mode",
        choices=["quadrature", "radau"],
        default="quadrature",
        help="right-hand side treatment (radau = interpolation at Radau zeros)",
    )
    sub.add_argument(
        "--quad", type=int, default=None, help="Gauss points per element (default k+3)"
    )


def _add_mesh_args(sub):
    sub.add_argument("--N", type=int, required=True, help="number of elements")
    sub.add_argument(
        "--mesh", choices=["uniform", "geometric"], default="uniform"
    )
    sub.add_argument(
        "--mesh-ratio",
        type=float,
        default=1.2,
        help="consecutive element-length ratio for geometric meshes",
    )


def _add_output_args(sub, what):
    sub.add_argument("--out", default=None, help=f"output path for the {what}")
    sub.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galerkin-time",
        description="Galerkin time integration for ODEs with Radau post-processing",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="solve and sample one problem")
    _add_problem_args(solve)
    _add_solver_args(solve)
    _add_mesh_args(solve)
    _add_output_args(solve, "sample table")
    solve.add_argument(
        "--samples", type=int, default=20, help="sample points per element"
    )
    solve.add_argument(
        "--check-coincidence",
        action="store_true",
        help="also compare the lifted DG solution against CG",
    )

    verify = subparsers.add_parser(
        "verify", help="run the structural identity suite for one configuration"
    )
    _add_problem_args(verify)
    _add_solver_args(verify)
    _add_mesh_args(verify)

    conv = subparsers.add_parser(
        "convergence", help="mesh-halving convergence study with observed orders"
    )
    _add_problem_args(conv)
    _add_solver_args(conv)
    conv.add_argument("--levels", type=int, required=True)
    conv.add_argument("--N0", type=int, default=4, help="coarsest element count")
    _add_output_args(conv, "convergence report")

    return parser


def _resolve_problem(args):
    if args.problem_file is not None:
        p = load_problem_file(args.problem_file)
        if args.T is not None:
            raise ConfigError("--T cannot override a problem file; set T there")
        return p
    try:
        return get_problem(args.problem, T=args.T)
    except ProblemError:
        raise ConfigError(
            f"unknown problem {args.problem!r}; "
            f"available: {', '.join(corpus_names())}"
        )


def _resolve_config(args) -> SolverConfig:
    mode = "radau_interpolated" if args.rhs_mode == "radau" else "quadrature"
    return SolverConfig(k=args.k, quad_points=args.quad, rhs_mode=mode).resolve()


def _build_mesh(args, T):
    if args.mesh == "geometric":
        return geometric(args.N, T, args.mesh_ratio)
    return uniform(args.N, T)


def _print_summary_table(rows):
    header = ("solution",) + NORMS
    widths = [max(len(h), 12) for h in header]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for name, summary in rows:
        cells = [name.ljust(widths[0])]
        for norm, w in zip(NORMS, widths[1:]):
            cells.append(f"{summary.as_dict()[norm]:.6e}".ljust(w))
        print("  ".join(cells))


def cmd_solve(args) -> int:
    p = _resolve_problem(args)
    cfg = _resolve_config(args)
    mesh = _build_mesh(args, p.T)
    tol = _tol_scale()

    dg = solve_dg(p, mesh, cfg)
    star = postprocess(dg)
    cg = solve_cg(p, mesh, cfg)

    out = args.out
    if out is None:
        out = f"solve_{p.name}_k{cfg.k}_N{mesh.N}.{args.format}"
    if args.format == "csv":
        text = solution_samples_csv(dg, star, cg, p, args.samples)
    else:
        text = _solution_samples_json(dg, star, cg, p, args.samples)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {out}")

    if p.exact is not None:
        _print_summary_table(
            [
                ("DG", error_summary(dg, p, args.samples)),
                ("DG_star", error_summary(star, p, args.samples)),
                ("CG", error_summary(cg, p, args.samples)),
            ]
        )

    status = 0
    if args.check_coincidence:
        gap = check_coincidence(p, mesh, cfg, force=True)
        bound = 1e-10 * dg.scale() * tol
        verdict = "PASS" if gap <= bound else "FAIL"
        applicable = p.time_only or cfg.rhs_mode == "radau_interpolated"
        note = "" if applicable else " (informational: coincidence not expected)"
        print(f"coincidence gap {gap:.3e} (bound {bound:.3e}) {verdict}{note}")
        if verdict == "FAIL" and applicable:
            status = 1
    return status


def _solution_samples_json(dg, star, cg, p, samples):
    import json

    from .problem import exact_at
    from .reporting import SAMPLES_SCHEMA

    taus = np.linspace(-1.0, 1.0, samples)
    records = []
    for n in range(dg.mesh.N):
        t = np.asarray(dg.mesh.from_reference(n, taus))
        vd, vs, vc = (s.eval_element(n, taus) for s in (dg, star, cg))
        for q in range(taus.size):
            rec = {
                "t": float(t[q]),
                "element": n,
                "u_dg": vd[q].tolist(),
                "u_dg_star": vs[q].tolist(),
                "u_cg": vc[q].tolist(),
            }
            if p.exact is not None:
                rec["exact"] = exact_at(p, t[q]).tolist()
            records.append(rec)
    return json.dumps({"schema": SAMPLES_SCHEMA, "samples": records}, indent=2) + "\n"


def _verify_radau_identities(k: int, tol: float):
    """Reference-interval identities of the degree-(k+1) left-Radau polynomial."""
    radau = polybasis.radau_left(k)
    endpoint = max(
        abs(polybasis.value_at_one(radau.coeffs)),
        abs(polybasis.value_at_minus_one(radau.coeffs) - 1.0),
    )
    rule = polybasis.gauss_rule(k + 2)
    rvals = polybasis.eval_poly(radau.coeffs, rule.nodes)
    drvals = polybasis.eval_poly(polybasis.derivative(radau.coeffs), rule.nodes)
    ortho = 0.0
    for j in range(k):  # vacuous for k = 0
        pj = polybasis.eval_poly(_unit_coeffs(j), rule.nodes)
        ortho = max(ortho, abs(rule.integrate(rvals * pj)))
    moment = 0.0
    for j in range(k + 1):
        pj_coeffs = _unit_coeffs(j)
        pj = polybasis.eval_poly(pj_coeffs, rule.nodes)
        lhs = rule.integrate(pj * drvals)
        rhs = -polybasis.value_at_minus_one(pj_coeffs)
        moment = max(moment, abs(lhs - rhs))
    checks = [
        ("left-Radau endpoint values", endpoint, 1e-14 * tol),
        ("left-Radau orthogonality", ortho, 1e-13 * tol),
        ("stabilization moment identity", moment, 1e-13 * tol),
    ]
    return checks


def _unit_coeffs(j: int) -> np.ndarray:
    c = np.zeros(j + 1)
    c[j] = 1.0
    return c


def cmd_verify(args) -> int:
    p = _resolve_problem(args)
    tol = _tol_scale()

    # Quadrature sufficiency comes first: with fewer than k+2 points the
    # Galerkin terms are not integrated exactly and the identities below
    # genuinely fail, so this is reported as a verification failure.
    m = args.quad if args.quad is not None else args.k + 3
    if args.k < 0:
        raise ConfigError(f"degree parameter k must be >= 0, got {args.k}")
    if m < args.k + 2:
        print(
            f"quadrature exactness (m >= k+2)          FAIL  "
            f"m={m} cannot integrate the degree-(2k+1)={2 * args.k + 1} "
            f"Galerkin integrands exactly for k={args.k}; need m >= {args.k + 2}"
        )
        return 1
    print("quadrature exactness (m >= k+2)          PASS")

    cfg = _resolve_config(args)
    mesh = _build_mesh(args, p.T)

    failures = 0

    for name, value, bound in _verify_radau_identities(cfg.k, tol):
        ok = value <= bound
        failures += 0 if ok else 1
        print(f"{name:<40} {'PASS' if ok else 'FAIL'}  max residual {value:.3e}")

    dg = solve_dg(p, mesh, cfg)
    star = postprocess(dg)
    scale = dg.scale()

    # the two DG assembly paths must agree at the computed solution
    consistency = 0.0
    inflow = p.u0
    for n in range(mesh.N):
        weak = assemble_element_residual("DG", p, mesh, n, cfg, dg.element(n), inflow, "weak")
        strong = assemble_element_residual("DG", p, mesh, n, cfg, dg.element(n), inflow, "strong")
        consistency = max(consistency, float(np.abs(weak - strong).max()))
        inflow = dg.traces[n + 1]
    ok = consistency <= 1e-13 * scale * tol
    failures += 0 if ok else 1
    print(f"{'weak/strong assembly consistency':<40} {'PASS' if ok else 'FAIL'}  max residual {consistency:.3e}")

    cont = check_continuity(star, dg, tol=1e-12 * tol)
    ok = cont.passed
    failures += 0 if ok else 1
    detail = f"max jump {cont.max_jump:.3e}, max trace gap {cont.max_trace_gap:.3e}"
    if not ok:
        detail += f" (clause {cont.failed_clause}, element {cont.element})"
    print(f"{'lift continuity and trace values':<40} {'PASS' if ok else 'FAIL'}  {detail}")

    report = check_galerkin_identity(star, dg, p, cfg)
    ok = report.max_residual <= 1e-10 * scale * tol and report.max_gap <= 1e-12 * scale * tol
    failures += 0 if ok else 1
    print(
        f"{'shared derivative discretization':<40} {'PASS' if ok else 'FAIL'}  "
        f"max residual {report.max_residual:.3e}, max gap {report.max_gap:.3e}"
    )

    stab = 0.0
    for n in range(mesh.N):
        for j in range(cfg.k + 1):
            a = stabilization_functional(dg, n, _unit_coeffs(j))
            b = stabilization_integral(dg, n, _unit_coeffs(j))
            stab = max(stab, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))
    ok = stab <= 1e-13 * scale * tol
    failures += 0 if ok else 1
    print(f"{'stabilization boundary/integral forms':<40} {'PASS' if ok else 'FAIL'}  max residual {stab:.3e}")

    return 1 if failures else 0


def cmd_convergence(args) -> int:
    p = _resolve_problem(args)
    cfg = _resolve_config(args)
    report = convergence_study(p, cfg, args.levels, args.N0)

    out = args.out
    if out is None:
        out = f"convergence_{p.name}_k{cfg.k}.{args.format}"
    text = convergence_csv(report) if args.format == "csv" else convergence_json(report)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {out}")

    print(f"problem={report.problem} k={report.k} rhs_mode={report.rhs_mode}")
    header = f"{'kind':<8} {'norm':<10} " + " ".join(
        f"N={N:<6}" for N in report.element_counts
    ) + " | orders (finest last)"
    print(header)
    for kind in report.errors:
        for norm in NORMS:
            errs = " ".join(f"{e:.2e}" for e in report.errors[kind][norm])
            orders = ", ".join(
                "-" if o is None else f"{o:.2f}" for o in report.orders[kind][norm]
            )
            finest = report.finest_orders[kind][norm]
            finest_s = "-" if finest is None else f"{finest:.2f}"
            print(f"{kind:<8} {norm:<10} {errs} | {orders} -> {finest_s}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "convergence":
            return cmd_convergence(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ProblemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1
    except GalerkinTimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
