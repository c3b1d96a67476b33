"""Galerkin time integration for ODEs.

Continuous (CG) and discontinuous (DG) Galerkin time-marching solvers, an
elementwise left-Radau lift that turns a DG solution into a continuous
degree-(k+1) approximation at no extra cost, and a verification and
convergence harness for the structural identities and superconvergence rates
the construction provides.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .analysis import (
    ConvergenceReport,
    ErrorSummary,
    check_coincidence,
    convergence_study,
    error_summary,
    observed_orders,
)
from .errors import (
    ConfigError,
    GalerkinTimeError,
    NewtonError,
    ProblemError,
    RootFindingError,
    SolverError,
)
from .mesh import TimeMesh, geometric, uniform
from .polybasis import (
    QuadratureRule,
    RadauPoly,
    derivative,
    eval_poly,
    gauss_rule,
    lagrange_to_legendre,
    legendre_eval,
    radau_left,
    radau_zeros,
)
from .postprocess import (
    ContinuityReport,
    GalerkinIdentityReport,
    check_continuity,
    check_galerkin_identity,
    postprocess,
    stabilization_functional,
    stabilization_integral,
)
from .problem import (
    OdeProblem,
    corpus_names,
    evaluate_rhs,
    exact_at,
    get_problem,
    load_problem_file,
    make_problem,
    rhs_registry_keys,
)
from .solvers import (
    ElementPoly,
    PiecewiseSolution,
    SolverConfig,
    assemble_element_residual,
    radau_interpolate_rhs,
    solve_cg,
    solve_dg,
)

__version__ = "0.1.0"
