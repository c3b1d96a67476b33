"""CSV and JSON emitters for solution samples and convergence reports.

Schemas are versioned in the header comment line (CSV) or the "schema" field
(JSON) and kept stable; floats are written with shortest round-trip repr so
repeated runs are byte-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .analysis import NORMS, ConvergenceReport
from .problem import OdeProblem, exact_at
from .solvers import PiecewiseSolution

__all__ = [
    "SAMPLES_SCHEMA",
    "CONVERGENCE_SCHEMA",
    "solution_samples_csv",
    "convergence_csv",
    "convergence_json",
]

SAMPLES_SCHEMA = "galerkin-time solution-samples v1"
CONVERGENCE_SCHEMA = "galerkin-time convergence-report v1"


def _fmt(x: float) -> str:
    return repr(float(x))


def _component_names(base: str, dim: int) -> list[str]:
    if dim == 1:
        return [base]
    return [f"{base}_{i}" for i in range(dim)]


def solution_samples_csv(
    dg: PiecewiseSolution,
    star: PiecewiseSolution,
    cg: PiecewiseSolution,
    p: OdeProblem,
    samples_per_element: int = 20,
) -> str:
    """Per-element sample table of the three solutions (and errors if exact)."""
    dim = p.dimension
    have_exact = p.exact is not None
    columns = ["t", "element"]
    for base in ("u_dg", "u_dg_star", "u_cg"):
        columns += _component_names(base, dim)
    if have_exact:
        columns += _component_names("exact", dim)
        for base in ("err_dg", "err_dg_star", "err_cg"):
            columns += _component_names(base, dim)

    taus = np.linspace(-1.0, 1.0, samples_per_element)
    lines = [f"# {SAMPLES_SCHEMA}", ",".join(columns)]
    for n in range(dg.mesh.N):
        t = np.asarray(dg.mesh.from_reference(n, taus))
        vals = [sol.eval_element(n, taus) for sol in (dg, star, cg)]
        if have_exact:
            ex = np.stack([exact_at(p, ti) for ti in t])
        for q in range(taus.size):
            row = [_fmt(t[q]), str(n)]
            for v in vals:
                row += [_fmt(x) for x in v[q]]
            if have_exact:
                row += [_fmt(x) for x in ex[q]]
                for v in vals:
                    row += [_fmt(x) for x in v[q] - ex[q]]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def convergence_csv(report: ConvergenceReport) -> str:
    """One row per level per solution kind per norm.

    The order column holds the observed order of the pair ending at that
    level; it is empty on the coarsest level and on roundoff-floored pairs.
    """
    lines = [
        f"# {CONVERGENCE_SCHEMA}",
        "problem,k,rhs_mode,level,N,h,kind,norm,error,order",
    ]
    for kind, per_norm in report.errors.items():
        for norm in NORMS:
            values = per_norm[norm]
            pair_orders = report.orders[kind][norm]
            for level, err in enumerate(values):
                order = pair_orders[level - 1] if level >= 1 else None
                lines.append(
                    ",".join(
                        [
                            report.problem,
                            str(report.k),
                            report.rhs_mode,
                            str(level),
                            str(report.element_counts[level]),
                            _fmt(report.mesh_sizes[level]),
                            kind,
                            norm,
                            _fmt(err),
                            "" if order is None else _fmt(order),
                        ]
                    )
                )
    return "\n".join(lines) + "\n"


def convergence_json(report: ConvergenceReport) -> str:
    payload = {
        "schema": CONVERGENCE_SCHEMA,
        "problem": report.problem,
        "k": report.k,
        "rhs_mode": report.rhs_mode,
        "element_counts": report.element_counts,
        "mesh_sizes": report.mesh_sizes,
        "scale": report.scale,
        "errors": report.errors,
        "orders": report.orders,
        "finest_orders": report.finest_orders,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
