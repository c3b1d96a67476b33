"""ODE problems u' = f(t, u), u(0) = u0, and the built-in test corpus.

Right-hand sides come from a registry of named closed forms (no expression
parsing); external problems are JSON descriptors that pick a registry entry:

    {"name": "...", "rhs": "<registry key>", "params": {...},
     "u0": [...], "T": <real>}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ProblemError

__all__ = [
    "OdeProblem",
    "evaluate_rhs",
    "exact_at",
    "rhs_registry_keys",
    "make_problem",
    "load_problem_file",
    "get_problem",
    "corpus_names",
    "corpus",
]


@dataclass(frozen=True, eq=False)
class OdeProblem:
    name: str
    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]
    u0: np.ndarray
    T: float
    rhs_du: Optional[Callable[[float, np.ndarray], np.ndarray]] = None
    exact: Optional[Callable[[float], np.ndarray]] = None
    time_only: bool = False  # True when f does not depend on u

    def __post_init__(self):
        u0 = np.atleast_1d(np.asarray(self.u0, dtype=np.float64))
        if u0.size != self.dimension:
            raise ProblemError(
                f"u0 has {u0.size} components, expected dimension {self.dimension}"
            )
        if not self.T > 0:
            raise ProblemError(f"horizon must be positive, got {self.T}")
        object.__setattr__(self, "u0", u0)


def evaluate_rhs(p: OdeProblem, t: float, u) -> np.ndarray:
    """f(t, u) as a (dimension,) vector; rejects non-finite output."""
    out = np.atleast_1d(np.asarray(p.rhs(t, np.asarray(u)), dtype=np.float64))
    if out.size != p.dimension:
        raise ProblemError(
            f"rhs of {p.name!r} returned {out.size} components, "
            f"expected {p.dimension}"
        )
    if not np.all(np.isfinite(out)):
        raise ProblemError(f"rhs of {p.name!r} is non-finite at t={t}")
    return out


def exact_at(p: OdeProblem, t: float) -> np.ndarray:
    """The exact solution at time t; requires the problem to carry one."""
    if p.exact is None:
        raise ProblemError(f"problem {p.name!r} has no exact solution")
    return np.atleast_1d(np.asarray(p.exact(t), dtype=np.float64))


# --- right-hand-side registry ------------------------------------------------
#
# Each builder takes (params, u0, T) and returns
#   (rhs, rhs_du, exact_or_None, time_only).


def _build_polynomial(params, u0, T):
    coeffs = np.asarray(params.get("coeffs", [1.0]), dtype=np.float64)
    anti = coeffs / np.arange(1, coeffs.size + 1)  # antiderivative, no constant
    dim = u0.size

    def rhs(t, u):
        return np.full(dim, np.polynomial.polynomial.polyval(t, coeffs))

    def rhs_du(t, u):
        return np.zeros((dim, dim))

    def exact(t):
        return u0 + t * np.polynomial.polynomial.polyval(t, anti)

    return rhs, rhs_du, exact, True


def _build_cosine(params, u0, T):
    amplitude = float(params.get("amplitude", 1.0))
    omega = float(params.get("omega", 1.0))
    dim = u0.size

    def rhs(t, u):
        return np.full(dim, amplitude * np.cos(omega * t))

    def rhs_du(t, u):
        return np.zeros((dim, dim))

    def exact(t):
        return u0 + (amplitude / omega) * np.sin(omega * t)

    return rhs, rhs_du, exact, True


def _build_linear(params, u0, T):
    rate = float(params.get("rate", -1.0))
    dim = u0.size

    def rhs(t, u):
        return rate * u

    def rhs_du(t, u):
        return rate * np.eye(dim)

    def exact(t):
        return u0 * np.exp(rate * t)

    return rhs, rhs_du, exact, False


def _build_quadratic(params, u0, T):
    # f = a * u^2 componentwise; exact solution u0 / (1 - a u0 t) per component
    a = float(params.get("a", -1.0))
    dim = u0.size

    def rhs(t, u):
        return a * u * u

    def rhs_du(t, u):
        return np.diag(2.0 * a * u)

    def exact(t):
        return u0 / (1.0 - a * u0 * t)

    return rhs, rhs_du, exact, False


_RHS_REGISTRY = {
    "polynomial": _build_polynomial,
    "cosine": _build_cosine,
    "linear": _build_linear,
    "quadratic": _build_quadratic,
}


def rhs_registry_keys() -> list[str]:
    return sorted(_RHS_REGISTRY)


def make_problem(name, rhs_key, params, u0, T) -> OdeProblem:
    """Assemble an OdeProblem from a registry right-hand side."""
    if rhs_key not in _RHS_REGISTRY:
        raise ProblemError(
            f"unknown rhs {rhs_key!r}; registry: {', '.join(rhs_registry_keys())}"
        )
    u0 = np.atleast_1d(np.asarray(u0, dtype=np.float64))
    rhs, rhs_du, exact, time_only = _RHS_REGISTRY[rhs_key](params or {}, u0, float(T))
    return OdeProblem(
        name=name,
        dimension=u0.size,
        rhs=rhs,
        u0=u0,
        T=float(T),
        rhs_du=rhs_du,
        exact=exact,
        time_only=time_only,
    )


def load_problem_file(path) -> OdeProblem:
    """Build a problem from a JSON descriptor file."""
    with open(path, encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemError(f"invalid JSON in {path}: {exc}") from exc
    for key in ("name", "rhs", "u0", "T"):
        if key not in spec:
            raise ProblemError(f"problem file {path} is missing {key!r}")
    return make_problem(
        spec["name"], spec["rhs"], spec.get("params", {}), spec["u0"], spec["T"]
    )


# --- built-in corpus ----------------------------------------------------------


def _corpus() -> dict[str, OdeProblem]:
    return {
        # pure-time polynomial: exact solution t^3 - t^2 + t
        "cubic": make_problem(
            "cubic", "polynomial", {"coeffs": [1.0, -2.0, 3.0]}, [0.0], 1.0
        ),
        # pure-time smooth: exact solution sin t
        "cosine": make_problem("cosine", "cosine", {}, [0.0], 1.0),
        # linear decay: exact solution e^{-t}
        "decay": make_problem("decay", "linear", {"rate": -1.0}, [1.0], 1.0),
        # nonlinear: u' = -u^2, exact solution 1/(1+t)
        "riccati": make_problem("riccati", "quadratic", {"a": -1.0}, [1.0], 1.0),
        # stiff-ish linear decay, for robustness checks
        "stiff_decay": make_problem(
            "stiff_decay", "linear", {"rate": -50.0}, [1.0], 1.0
        ),
    }


corpus = _corpus()


def corpus_names() -> list[str]:
    return sorted(corpus)


def get_problem(name: str, T: float | None = None) -> OdeProblem:
    """Fetch a corpus problem, optionally rebuilt with a different horizon."""
    if name not in corpus:
        raise ProblemError(
            f"unknown problem {name!r}; available: {', '.join(corpus_names())}"
        )
    p = corpus[name]
    if T is None or T == p.T:
        return p
    rebuilt = {
        "cubic": ("polynomial", {"coeffs": [1.0, -2.0, 3.0]}, [0.0]),
        "cosine": ("cosine", {}, [0.0]),
        "decay": ("linear", {"rate": -1.0}, [1.0]),
        "riccati": ("quadratic", {"a": -1.0}, [1.0]),
        "stiff_decay": ("linear", {"rate": -50.0}, [1.0]),
    }[name]
    return make_problem(name, rebuilt[0], rebuilt[1], rebuilt[2], T)
