"""Elementwise Radau lift of the DG solution and its verification checks.

The lift adds, on each element, the scaled left-Radau polynomial times the
solution's jump at the element's left node:

    u*(t) = u(t) + (trace - u)(left node, from the right) * R_{k+1}(tau(t)).

Because R_{k+1} is 1 at the left node and 0 at the right one, u* is
continuous and matches the traces at every node; because R_{k+1} is
orthogonal to degree <= k-1, u* satisfies the same Galerkin equations as the
continuous method, with the right-hand side still evaluated on the original
DG solution.  The checks below verify those structural facts on computed
solutions, at floating-point tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import polybasis
from .errors import ConfigError
from .problem import OdeProblem
from .solvers import PiecewiseSolution, SolverConfig, _rhs_terms, _Workspace

__all__ = [
    "GalerkinIdentityReport",
    "ContinuityReport",
    "postprocess",
    "check_continuity",
    "check_galerkin_identity",
    "stabilization_functional",
    "stabilization_integral",
]


@dataclass(eq=False)
class ContinuityReport:
    """Outcome of the structural checks on a lifted solution."""

    passed: bool
    failed_clause: str | None  # "degree", "continuity", or "traces"
    element: int | None
    max_jump: float
    max_trace_gap: float
    scale: float


@dataclass(eq=False)
class GalerkinIdentityReport:
    """Residuals of the lifted solution in the continuous-method equations.

    residuals[n, j] is the magnitude of the j-th Galerkin residual of u* on
    element n, with the right-hand side evaluated on the DG solution using
    the same rule and rhs_mode as the solve.  gaps[n] are the continuity
    mismatches at the nodes, gaps[0] being u*(0+) - u0.
    """

    residuals: np.ndarray
    gaps: np.ndarray
    max_residual: float
    max_gap: float
    scale: float


def postprocess(sol: PiecewiseSolution) -> PiecewiseSolution:
    """Lift a DG solution to the continuous degree-(k+1) approximation.

    Pure coefficient arithmetic per element; no equation solves and no new
    evaluations of the right-hand side.
    """
    if sol.kind != "DG":
        raise ConfigError(f"postprocess expects a DG solution, got {sol.kind!r}")
    radau = polybasis.radau_left(sol.k)
    N, nc, dim = sol.coeffs.shape
    star = np.zeros((N, nc + 1, dim))
    star[:, :nc, :] = sol.coeffs
    jumps = sol.traces[:-1] - sol.right_limits()  # (trace - u) at left nodes
    star += radau.coeffs[None, :, None] * jumps[:, None, :]
    return PiecewiseSolution(
        mesh=sol.mesh,
        kind="DG_star",
        k=sol.k,
        coeffs=star,
        traces=sol.traces.copy(),
    )


def check_continuity(
    star: PiecewiseSolution, dg: PiecewiseSolution, tol: float = 1e-12
) -> ContinuityReport:
    """Structural checks on the lifted solution.

    (degree)     each element polynomial has degree <= k + 1;
    (continuity) inter-element jumps are <= tol * scale;
    (traces)     nodal values equal the traces to tol * scale.
    Returns the first violated clause with the offending element index.
    """
    scale = dg.scale()
    bound = tol * scale

    if star.kind != "DG_star" or star.coeffs.shape[1] != dg.k + 2:
        return ContinuityReport(False, "degree", None, np.inf, np.inf, scale)

    rights = star.right_limits()  # u*(t_n^+), n = 0..N-1
    lefts = star.left_limits()  # u*(t_n^-), n = 1..N
    jumps = np.abs(rights[1:] - lefts[:-1]).max(axis=1)
    max_jump = float(jumps.max()) if jumps.size else 0.0

    trace_gaps = np.maximum(
        np.abs(rights - star.traces[:-1]).max(axis=1),
        np.abs(lefts - star.traces[1:]).max(axis=1),
    )
    max_trace_gap = float(trace_gaps.max())

    if max_jump > bound:
        element = int(jumps.argmax()) + 1
        return ContinuityReport(False, "continuity", element, max_jump, max_trace_gap, scale)
    if max_trace_gap > bound:
        element = int(trace_gaps.argmax())
        return ContinuityReport(False, "traces", element, max_jump, max_trace_gap, scale)
    return ContinuityReport(True, None, None, max_jump, max_trace_gap, scale)


def check_galerkin_identity(
    star: PiecewiseSolution,
    dg: PiecewiseSolution,
    p: OdeProblem,
    cfg: SolverConfig,
) -> GalerkinIdentityReport:
    """Residuals of u* in the continuous-method equations, rhs on u_DG.

    Uses the same quadrature rule and rhs_mode as the DG solve, so the
    residuals measure only the identity, not the rhs approximation.
    """
    cfg = cfg.resolve()
    k = cfg.k
    ws_dg = _Workspace(cfg, trial_degree=k)  # rhs evaluated on the DG solution
    ws_star = _Workspace(cfg, trial_degree=k + 1)
    N = dg.mesh.N
    residuals = np.zeros((N, k + 1))
    for n in range(N):
        B, _ = _rhs_terms(ws_dg, p, dg.mesh, n, dg.coeffs[n], False)
        lhs = ws_star.G_strong @ star.coeffs[n]  # int P_j d(u*)/dt over I_n
        residuals[n] = np.abs(lhs - B).max(axis=1)

    gaps = np.zeros(N + 1)
    rights = star.right_limits()
    lefts = star.left_limits()
    gaps[0] = np.abs(rights[0] - p.u0).max()
    gaps[1:N] = np.abs(rights[1:] - lefts[:-1]).max(axis=1)
    # final node: the left limit must match the stored trace
    gaps[N] = np.abs(lefts[-1] - star.traces[-1]).max()

    return GalerkinIdentityReport(
        residuals=residuals,
        gaps=gaps,
        max_residual=float(residuals.max()),
        max_gap=float(gaps.max()),
        scale=dg.scale(),
    )


def _jump(dg: PiecewiseSolution, n: int) -> np.ndarray:
    """(trace - u)(left node of element n, from the right)."""
    signs = (-1.0) ** np.arange(dg.coeffs.shape[1])
    return dg.traces[n] - signs @ dg.coeffs[n]


def stabilization_functional(dg: PiecewiseSolution, n: int, v) -> float | np.ndarray:
    """The upwind stabilization term of element n for a test polynomial v.

    S(v) = (trace - u) v evaluated across the element boundary, which
    collapses to -(jump at the left node) * v(-1) since the trace equals the
    solution's own left limit at the right node.  Scalar for scalar problems.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] - 1 > dg.k:
        raise ConfigError(
            f"test polynomial degree {v.shape[0] - 1} exceeds k = {dg.k}"
        )
    s = -_jump(dg, n) * polybasis.value_at_minus_one(v)
    return float(s[0]) if dg.dimension == 1 else s


def stabilization_integral(dg: PiecewiseSolution, n: int, v) -> float | np.ndarray:
    """The same functional written as jump * integral of v R'_{k+1}.

    The affine map cancels in the integrand, so this is a reference-interval
    quadrature; it must agree with stabilization_functional to roundoff.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] - 1 > dg.k:
        raise ConfigError(
            f"test polynomial degree {v.shape[0] - 1} exceeds k = {dg.k}"
        )
    radau = polybasis.radau_left(dg.k)
    rule = polybasis.gauss_rule(dg.k + 2)  # integrand degree <= 2k
    integrand = polybasis.eval_poly(v, rule.nodes) * polybasis.eval_poly(
        polybasis.derivative(radau.coeffs), rule.nodes
    )
    s = _jump(dg, n) * rule.integrate(integrand)
    return float(s[0]) if dg.dimension == 1 else s
