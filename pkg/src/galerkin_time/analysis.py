"""Error norms, observed convergence orders, and CG/DG* equivalence checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import polybasis
from .errors import ConfigError
from .mesh import TimeMesh, uniform
from .postprocess import postprocess
from .problem import OdeProblem, exact_at
from .solvers import PiecewiseSolution, SolverConfig, solve_cg, solve_dg

__all__ = [
    "ErrorSummary",
    "ConvergenceReport",
    "error_summary",
    "observed_orders",
    "convergence_study",
    "check_coincidence",
]

KINDS = ("DG", "DG_star", "CG")
NORMS = ("l2", "linf", "nodal", "radau_pts")

# Errors below ROUNDOFF_FLOOR * scale are excluded from order estimation.
ROUNDOFF_FLOOR = 1e-12


@dataclass(eq=False)
class ErrorSummary:
    """Solution-versus-exact errors in the four norms used throughout.

    l2 is the elementwise-quadrature L2 norm over [0, T]; linf the max over
    dense per-element sampling; nodal the max over left limits at the nodes
    t_1..t_N; radau_pts the max over the mapped left-Radau zeros.
    """

    l2: float
    linf: float
    nodal: float
    radau_pts: float

    def as_dict(self) -> dict[str, float]:
        return {
            "l2": self.l2,
            "linf": self.linf,
            "nodal": self.nodal,
            "radau_pts": self.radau_pts,
        }


@dataclass(eq=False)
class ConvergenceReport:
    """Errors and observed orders on a halving sequence of uniform meshes."""

    problem: str
    k: int
    rhs_mode: str
    element_counts: list[int]
    mesh_sizes: list[float]
    errors: dict[str, dict[str, list[float]]]  # kind -> norm -> per level
    orders: dict[str, dict[str, list[float | None]]]  # consecutive pairs
    finest_orders: dict[str, dict[str, float | None]]
    scale: float


def error_summary(
    sol: PiecewiseSolution, p: OdeProblem, samples_per_element: int = 20
) -> ErrorSummary:
    """Measure a solution against the problem's exact solution."""
    if p.exact is None:
        raise ConfigError(f"problem {p.name!r} has no exact solution")
    if samples_per_element < 2:
        raise ConfigError("samples_per_element must be >= 2")
    mesh = sol.mesh
    rule = polybasis.gauss_rule(sol.k + 4)
    tau_dense = np.linspace(-1.0, 1.0, samples_per_element)
    radau_z = polybasis.radau_zeros(sol.k)

    l2_sq = 0.0
    linf = 0.0
    radau_err = 0.0
    for n in range(mesh.N):
        h = mesh.h(n)
        for taus, which in ((rule.nodes, "l2"), (tau_dense, "linf"), (radau_z, "radau")):
            t = np.asarray(mesh.from_reference(n, taus))
            diff = sol.eval_element(n, taus) - np.stack(
                [exact_at(p, ti) for ti in t]
            )
            if which == "l2":
                l2_sq += 0.5 * h * float(rule.weights @ (diff * diff).sum(axis=1))
            elif which == "linf":
                linf = max(linf, float(np.abs(diff).max()))
            else:
                radau_err = max(radau_err, float(np.abs(diff).max()))

    lefts = sol.left_limits()
    exact_nodes = np.stack([exact_at(p, t) for t in mesh.nodes[1:]])
    nodal = float(np.abs(lefts - exact_nodes).max())

    return ErrorSummary(l2=math.sqrt(l2_sq), linf=linf, nodal=nodal, radau_pts=radau_err)


def observed_orders(
    errors, scale: float, floor: float = ROUNDOFF_FLOOR
) -> tuple[list[float | None], float | None]:
    """log2 ratios of consecutive errors, skipping roundoff-floored levels.

    Returns (per-pair orders, finest usable pair's order).  A pair counts
    only when both errors sit above floor * scale.
    """
    errors = list(errors)
    cutoff = floor * scale
    pairs: list[float | None] = []
    for a, b in zip(errors, errors[1:]):
        if a > cutoff and b > cutoff:
            pairs.append(math.log2(a / b))
        else:
            pairs.append(None)
    finest = next((p for p in reversed(pairs) if p is not None), None)
    return pairs, finest


def convergence_study(
    p: OdeProblem, cfg: SolverConfig, levels: int, N0: int
) -> ConvergenceReport:
    """Solve on meshes N0 * 2^l, l = 0..levels-1, and estimate orders.

    Tracks the DG solution, its Radau lift, and the CG solution in all four
    norms.  Expected orders for smooth problems: DG converges at k+1 in L2
    and 2k+1 at the nodes; the lift reaches k+2 in L2 for k > 0 (k = 1 order
    for k = 0) and the DG error at the Radau zeros also decays at k+2; CG
    (degree k+1) reaches k+2 in L2 and 2k+2 at the nodes.
    """
    if levels < 3:
        raise ConfigError(f"levels must be >= 3 for order estimates, got {levels}")
    if N0 < 1:
        raise ConfigError(f"N0 must be >= 1, got {N0}")
    cfg = cfg.resolve()

    counts: list[int] = []
    sizes: list[float] = []
    errors: dict[str, dict[str, list[float]]] = {
        kind: {norm: [] for norm in NORMS} for kind in KINDS
    }
    scale = 1.0
    for level in range(levels):
        N = N0 * 2**level
        mesh = uniform(N, p.T)
        dg = solve_dg(p, mesh, cfg)
        star = postprocess(dg)
        cg = solve_cg(p, mesh, cfg)
        counts.append(N)
        sizes.append(p.T / N)
        for kind, sol in (("DG", dg), ("DG_star", star), ("CG", cg)):
            summary = error_summary(sol, p)
            for norm, value in summary.as_dict().items():
                errors[kind][norm].append(value)
            scale = max(scale, sol.scale())

    orders = {
        kind: {
            norm: observed_orders(errors[kind][norm], scale)[0] for norm in NORMS
        }
        for kind in KINDS
    }
    finest = {
        kind: {
            norm: observed_orders(errors[kind][norm], scale)[1] for norm in NORMS
        }
        for kind in KINDS
    }
    return ConvergenceReport(
        problem=p.name,
        k=cfg.k,
        rhs_mode=cfg.rhs_mode,
        element_counts=counts,
        mesh_sizes=sizes,
        errors=errors,
        orders=orders,
        finest_orders=finest,
        scale=scale,
    )


def check_coincidence(
    p: OdeProblem,
    mesh: TimeMesh,
    cfg: SolverConfig,
    force: bool = False,
    samples_per_element: int = 20,
) -> float:
    """Max pointwise gap between the lifted DG solution and the CG solution.

    The two coincide (to roundoff) when f depends only on t, or when both
    solvers run in radau_interpolated mode; otherwise the comparison is
    order-(k+2) close but not exact, and the call refuses to run unless
    forced.  Both solves share the same configuration.
    """
    cfg = cfg.resolve()
    if not (p.time_only or cfg.rhs_mode == "radau_interpolated" or force):
        raise ConfigError(
            "coincidence holds only for time-only right-hand sides or "
            "rhs_mode='radau_interpolated'; pass force=True to measure the "
            "gap anyway"
        )
    dg = solve_dg(p, mesh, cfg)
    star = postprocess(dg)
    cg = solve_cg(p, mesh, cfg)
    taus = np.linspace(-1.0, 1.0, samples_per_element)
    gap = 0.0
    for n in range(mesh.N):
        diff = star.eval_element(n, taus) - cg.eval_element(n, taus)
        gap = max(gap, float(np.abs(diff).max()))
    return gap
