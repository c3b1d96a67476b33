"""Elementwise time marching for the CG and DG methods.

Both methods march left to right, solving one small dense nonlinear system
per element for the Legendre coefficients of the local solution (in the
element's reference variable).  DG uses trial and test degree k with the
upwind trace carrying information across nodes; CG uses trial degree k + 1,
test degree k, and an explicit continuity constraint at the left node.

The right-hand side integrals can be evaluated two ways (rhs_mode):
  * "quadrature": f sampled at the Gauss points of the shared rule;
  * "radau_interpolated": f replaced elementwise by its degree-k Lagrange
    interpolant at the mapped zeros of the left-Radau polynomial, then
    integrated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import polybasis
from ._kernels import legendre_deriv_table, legendre_table
from .errors import ConfigError, NewtonError, SolverError
from .mesh import TimeMesh
from .problem import OdeProblem, evaluate_rhs

__all__ = [
    "SolverConfig",
    "ElementPoly",
    "PiecewiseSolution",
    "solve_cg",
    "solve_dg",
    "assemble_element_residual",
    "radau_interpolate_rhs",
]

RHS_MODES = ("quadrature", "radau_interpolated")


@dataclass(frozen=True)
class SolverConfig:
    """Degree parameter and solve controls shared by both methods.

    k is the DG polynomial degree; CG uses degree k + 1.  quad_points
    defaults to k + 3, and must stay >= k + 2 so that every bilinear term
    with polynomial integrand (degree <= 2k + 1) is integrated exactly.
    """

    k: int
    quad_points: int | None = None
    rhs_mode: str = "quadrature"
    newton_tol: float = 1e-13
    newton_max_iter: int = 50

    def resolve(self) -> "SolverConfig":
        """Fill defaults and validate; solver entry points call this."""
        if self.k < 0:
            raise ConfigError(f"degree parameter k must be >= 0, got {self.k}")
        if self.rhs_mode not in RHS_MODES:
            raise ConfigError(
                f"rhs_mode must be one of {RHS_MODES}, got {self.rhs_mode!r}"
            )
        m = self.quad_points if self.quad_points is not None else self.k + 3
        if m < self.k + 2:
            raise ConfigError(
                f"quad_points={m} is too small for k={self.k}: the Galerkin "
                f"terms have polynomial integrands of degree up to 2k+1, so "
                f"m >= k+2 = {self.k + 2} is required for exact integration"
            )
        if not self.newton_tol > 0:
            raise ConfigError(f"newton_tol must be positive, got {self.newton_tol}")
        if self.newton_max_iter < 1:
            raise ConfigError(
                f"newton_max_iter must be >= 1, got {self.newton_max_iter}"
            )
        return replace(self, quad_points=m)


@dataclass(frozen=True, eq=False)
class ElementPoly:
    """One element's solution polynomial in the reference variable.

    coeffs has shape (ncoef, dim): Legendre coefficients per state component.
    """

    index: int
    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1


@dataclass(eq=False)
class PiecewiseSolution:
    """A piecewise-polynomial solution plus its nodal trace values.

    kind is "CG", "DG", or "DG_star".  coeffs is (N, ncoef, dim); traces is
    (N+1, dim).  For DG the traces are the upwind values (trace n equals the
    left limit at node n, with trace 0 the initial value); for the continuous
    kinds they simply equal the nodal values.
    """

    mesh: TimeMesh
    kind: str
    k: int
    coeffs: np.ndarray
    traces: np.ndarray

    @property
    def dimension(self) -> int:
        return self.coeffs.shape[2]

    def element(self, n: int) -> ElementPoly:
        return ElementPoly(index=n, coeffs=self.coeffs[n])

    def eval_element(self, n: int, tau) -> np.ndarray:
        """Values on element n at reference points tau, shape (npts, dim)."""
        return polybasis.eval_poly(self.coeffs[n], np.atleast_1d(tau))

    def __call__(self, t: float, side: str = "left") -> np.ndarray:
        """Value at time t, attributed one-sidedly at element nodes."""
        n = self.mesh.locate(t, side=side)
        tau = self.mesh.to_reference(n, t)
        return self.eval_element(n, tau)[0]

    def left_limits(self) -> np.ndarray:
        """u(t_n^-) for n = 1..N, shape (N, dim)."""
        return self.coeffs.sum(axis=1)

    def right_limits(self) -> np.ndarray:
        """u(t_n^+) for n = 0..N-1, shape (N, dim)."""
        signs = (-1.0) ** np.arange(self.coeffs.shape[1])
        return np.einsum("c,ncd->nd", signs, self.coeffs)

    def scale(self) -> float:
        """1 + max nodal magnitude; the reference scale for tolerances."""
        return 1.0 + float(np.max(np.abs(self.traces)))


class _Workspace:
    """Reference-interval tables shared by every element of one solve."""

    def __init__(self, cfg: SolverConfig, trial_degree: int):
        k = cfg.k
        m = cfg.quad_points
        self.k = k
        self.trial_degree = trial_degree
        self.ncoef = trial_degree + 1
        self.rule = polybasis.gauss_rule(m)
        xi = self.rule.nodes
        self.w = self.rule.weights
        self.phi = legendre_table(k, xi)  # test values, (k+1, m)
        self.psi = legendre_table(trial_degree, xi)  # trial values, (ncoef, m)
        self.D = polybasis.derivative_matrix(self.ncoef)
        self.psi_d = legendre_table(max(trial_degree - 1, 0), xi)
        self.e_plus = np.ones(self.ncoef)
        self.e_minus = (-1.0) ** np.arange(self.ncoef)
        self.vsign = (-1.0) ** np.arange(k + 1)  # v_j(-1)
        # weighted test tables: Q[j, q] = w_q * phi[j, q]
        self.phi_w = self.phi * self.w
        self.dphi_w = legendre_deriv_table(k, xi) * self.w
        # strong-form derivative matrix: G[j, l] = sum_q w_q phi_jq (D psi)_lq
        self.G_strong = self.phi_w @ self.psi_d.T @ self.D
        # weak-form derivative matrix: Gw[j, l] = sum_q w_q phi'_jq psi_lq
        self.G_weak = self.dphi_w @ self.psi.T

        if cfg.rhs_mode == "radau_interpolated":
            radau = polybasis.radau_left(k)
            self.z = radau.zeros  # k+1 interpolation nodes
            self.psi_z = legendre_table(trial_degree, self.z)  # (ncoef, k+1)
            vand = legendre_table(k, self.z).T  # (k+1, k+1)
            # interpolant values at the quadrature nodes: ghat = M @ g(z)
            self.interp = np.linalg.solve(vand.T, self.phi).T  # (m, k+1)
        else:
            self.z = None

    def eval_times(self, mesh: TimeMesh, n: int) -> np.ndarray:
        """Times where f is sampled on element n (Gauss or Radau nodes)."""
        ref = self.rule.nodes if self.z is None else self.z
        return np.asarray(mesh.from_reference(n, ref))


def _rhs_jacobian(p: OdeProblem, t: float, u: np.ndarray) -> np.ndarray:
    """df/du at (t, u): analytic when provided, else forward differences."""
    if p.rhs_du is not None:
        return np.asarray(p.rhs_du(t, u), dtype=np.float64).reshape(
            p.dimension, p.dimension
        )
    f0 = evaluate_rhs(p, t, u)
    jac = np.empty((p.dimension, p.dimension))
    for j in range(p.dimension):
        step = np.sqrt(np.finfo(float).eps) * (1.0 + abs(u[j]))
        up = u.copy()
        up[j] += step
        jac[:, j] = (evaluate_rhs(p, t, up) - f0) / step
    return jac


def _rhs_terms(ws, p, mesh, n, C, need_jacobian):
    """B (rhs moment vector) and its Jacobian wrt the trial coefficients.

    B[j] = (h/2) * integral of ghat * P_j over the reference interval, where
    ghat is f itself (quadrature mode) or its Radau-point interpolant.
    """
    h = mesh.h(n)
    dim = C.shape[1]
    if ws.z is None:
        t_eval = mesh.from_reference(n, ws.rule.nodes)
        u_eval = ws.psi.T @ C  # (m, dim)
        g = np.stack([evaluate_rhs(p, t_eval[q], u_eval[q]) for q in range(len(t_eval))])
        B = 0.5 * h * (ws.phi_w @ g)
        if not need_jacobian:
            return B, None
        jac_f = np.stack([_rhs_jacobian(p, t_eval[q], u_eval[q]) for q in range(len(t_eval))])
        JB = 0.5 * h * np.einsum("jq,qab,lq->jalb", ws.phi_w, jac_f, ws.psi)
    else:
        t_eval = mesh.from_reference(n, ws.z)
        u_eval = ws.psi_z.T @ C  # (k+1, dim)
        g = np.stack([evaluate_rhs(p, t_eval[r], u_eval[r]) for r in range(len(t_eval))])
        ghat = ws.interp @ g  # values at the quadrature nodes
        B = 0.5 * h * (ws.phi_w @ ghat)
        if not need_jacobian:
            return B, None
        jac_f = np.stack([_rhs_jacobian(p, t_eval[r], u_eval[r]) for r in range(len(t_eval))])
        W_eff = 0.5 * h * (ws.phi_w @ ws.interp)  # (k+1, k+1)
        JB = np.einsum("jr,rab,lr->jalb", W_eff, jac_f, ws.psi_z)
    return B, JB


def _dg_linear_parts(ws, form):
    """Linear-in-C part of the DG residual and its constant inflow column.

    Returns (A, b_inflow) with residual_linear = A @ C + b_inflow * inflow,
    rows indexed by the test function j.
    """
    k = ws.k
    if form == "weak":
        # -int u v_j' + u(1) v_j(1) - inflow v_j(-1)
        A = -ws.G_weak + np.outer(np.ones(k + 1), ws.e_plus)
        b = -ws.vsign
    elif form == "strong":
        # int v_j u' + (u(-1) - inflow) v_j(-1)
        A = ws.G_strong + np.outer(ws.vsign, ws.e_minus)
        b = -ws.vsign
    else:
        raise ConfigError(f"form must be 'weak' or 'strong', got {form!r}")
    return A, b


def _dg_residual(ws, p, mesh, n, C, inflow, form, need_jacobian):
    A, b = _dg_linear_parts(ws, form)
    B, JB = _rhs_terms(ws, p, mesh, n, C, need_jacobian)
    R = A @ C + np.outer(b, inflow) - B
    if not need_jacobian:
        return R, None
    dim = C.shape[1]
    J = np.einsum("jl,ab->jalb", A, np.eye(dim)) - JB
    return R, J


def _cg_residual(ws, p, mesh, n, C, inflow, need_jacobian):
    # rows 0..k: int v_j u' - B_j; row k+1: continuity u(-1) - inflow
    B, JB = _rhs_terms(ws, p, mesh, n, C, need_jacobian)
    R_gal = ws.G_strong @ C - B
    R_cont = ws.e_minus @ C - inflow
    R = np.vstack([R_gal, R_cont[None, :]])
    if not need_jacobian:
        return R, None
    dim = C.shape[1]
    k = ws.k
    J = np.zeros((k + 2, dim, ws.ncoef, dim))
    J[: k + 1] = np.einsum("jl,ab->jalb", ws.G_strong, np.eye(dim)) - JB
    J[k + 1] = np.einsum("l,ab->alb", ws.e_minus, np.eye(dim))
    return R, J


def _newton_march(ws, p, mesh, cfg, residual_fn):
    """March all elements; residual_fn(n, C, inflow, need_jac) -> (R, J)."""
    N = mesh.N
    dim = p.dimension
    nc = ws.ncoef
    coeffs = np.zeros((N, nc, dim))
    traces = np.zeros((N + 1, dim))
    traces[0] = p.u0
    inflow = p.u0.copy()
    for n in range(N):
        C = np.zeros((nc, dim))
        C[0] = inflow  # constant extrapolation of the inflow value
        scale = 1.0 + float(np.max(np.abs(inflow)))
        rnorm = np.inf
        converged = False
        for _ in range(cfg.newton_max_iter):
            R, J = residual_fn(n, C, inflow, True)
            if not np.all(np.isfinite(R)):
                raise SolverError(f"non-finite residual on element {n}")
            rnorm = float(np.max(np.abs(R)))
            if rnorm <= cfg.newton_tol * scale:
                converged = True
                break
            neq = R.size
            try:
                delta = np.linalg.solve(J.reshape(neq, neq), -R.reshape(neq))
            except np.linalg.LinAlgError as exc:
                raise SolverError(
                    f"singular Newton system on element {n}: {exc}"
                ) from exc
            C = C + delta.reshape(C.shape)
            if not np.all(np.isfinite(C)):
                raise SolverError(f"non-finite state on element {n}")
        if not converged:
            raise NewtonError(n, rnorm, cfg.newton_max_iter)
        coeffs[n] = C
        outflow = ws.e_plus @ C
        traces[n + 1] = outflow
        inflow = outflow
    return coeffs, traces


def solve_dg(p: OdeProblem, mesh: TimeMesh, cfg: SolverConfig) -> PiecewiseSolution:
    """DG solution of degree k per element with upwind traces.

    Per element, the k+1 Galerkin equations (test functions P_0..P_k) are
    solved with the inflow trace taken from the previous element (the initial
    value on the first); the outflow trace is the element's right limit.
    """
    cfg = cfg.resolve()
    ws = _Workspace(cfg, trial_degree=cfg.k)

    def residual(n, C, inflow, need_jac):
        return _dg_residual(ws, p, mesh, n, C, inflow, "weak", need_jac)

    coeffs, traces = _newton_march(ws, p, mesh, cfg, residual)
    return PiecewiseSolution(mesh=mesh, kind="DG", k=cfg.k, coeffs=coeffs, traces=traces)


def solve_cg(p: OdeProblem, mesh: TimeMesh, cfg: SolverConfig) -> PiecewiseSolution:
    """CG solution of degree k+1 per element, continuous at the nodes.

    Per element, k+1 Galerkin equations plus the left-continuity constraint
    determine the k+2 coefficients; continuity makes the result a single
    continuous piecewise polynomial on [0, T].
    """
    cfg = cfg.resolve()
    ws = _Workspace(cfg, trial_degree=cfg.k + 1)

    def residual(n, C, inflow, need_jac):
        return _cg_residual(ws, p, mesh, n, C, inflow, need_jac)

    coeffs, traces = _newton_march(ws, p, mesh, cfg, residual)
    return PiecewiseSolution(mesh=mesh, kind="CG", k=cfg.k, coeffs=coeffs, traces=traces)


def assemble_element_residual(
    method: str,
    p: OdeProblem,
    mesh: TimeMesh,
    n: int,
    cfg: SolverConfig,
    candidate: ElementPoly,
    inflow,
    form: str = "weak",
) -> np.ndarray:
    """Galerkin residual of a candidate element polynomial.

    For DG the k+1 rows are the weak-form residuals ("weak", the default,
    with the derivative moved onto the test function) or the equivalent
    strong form with the left-jump stabilization term ("strong"); the two
    agree to roundoff for any candidate.  For CG the k+1 Galerkin rows are
    followed by the continuity row and `form` is ignored.
    """
    cfg = cfg.resolve()
    inflow = np.atleast_1d(np.asarray(inflow, dtype=np.float64))
    C = np.asarray(candidate.coeffs, dtype=np.float64)
    if C.ndim == 1:
        C = C[:, None]
    if method == "DG":
        if C.shape[0] != cfg.k + 1:
            raise ConfigError(
                f"DG candidate needs {cfg.k + 1} coefficients, got {C.shape[0]}"
            )
        ws = _Workspace(cfg, trial_degree=cfg.k)
        R, _ = _dg_residual(ws, p, mesh, n, C, inflow, form, False)
    elif method == "CG":
        if C.shape[0] != cfg.k + 2:
            raise ConfigError(
                f"CG candidate needs {cfg.k + 2} coefficients, got {C.shape[0]}"
            )
        ws = _Workspace(cfg, trial_degree=cfg.k + 1)
        R, _ = _cg_residual(ws, p, mesh, n, C, inflow, False)
    else:
        raise ConfigError(f"method must be 'CG' or 'DG', got {method!r}")
    return R


def radau_interpolate_rhs(
    p: OdeProblem, mesh: TimeMesh, n: int, k: int, u_elem: ElementPoly
) -> np.ndarray:
    """Degree-k interpolant of t -> f(t, u_elem(t)) at the mapped Radau zeros.

    Returns Legendre coefficients of shape (k+1, dim) in the element's
    reference variable.  Because the interpolation nodes include every zero
    of the left-Radau polynomial, the interpolant is unchanged when u_elem is
    replaced by its Radau lift (they agree at all the nodes).
    """
    z = polybasis.radau_zeros(k)
    t_z = np.asarray(mesh.from_reference(n, z))
    C = np.asarray(u_elem.coeffs, dtype=np.float64)
    if C.ndim == 1:
        C = C[:, None]
    u_z = polybasis.eval_poly(C, z)
    g = np.stack([evaluate_rhs(p, t_z[r], u_z[r]) for r in range(z.size)])
    return polybasis.lagrange_to_legendre(z, g)
