"""Pure-Python (numpy) kernels: the fallback backend.

Same contract as the compiled backend in ``_core``: float64 in, float64 out,
all polynomials live on the reference interval [-1, 1] in the Legendre basis.
"""

import numpy as np


def legendre_table(nmax, x):
    """Values P_0(x)..P_nmax(x), shape (nmax + 1, len(x)).

    Three-term recurrence (n+1)P_{n+1} = (2n+1)x P_n - n P_{n-1}, which keeps
    the P_n(1) = 1 normalization exact in floating point.
    """
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    out = np.empty((nmax + 1, x.size))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x
    for n in range(1, nmax):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def legendre_deriv_table(nmax, x):
    """Values P_0'(x)..P_nmax'(x), shape (nmax + 1, len(x)).

    Uses P'_{n+1} = (2n+1) P_n + P'_{n-1}, valid on the closed interval.
    """
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    p = legendre_table(nmax, x)
    out = np.empty((nmax + 1, x.size))
    out[0] = 0.0
    if nmax >= 1:
        out[1] = 1.0
    for n in range(1, nmax):
        out[n + 1] = (2 * n + 1) * p[n] + out[n - 1]
    return out


def legendre_series(coeffs, x):
    """Evaluate sum_l coeffs[l] P_l(x) at every point of x.

    coeffs may be (nc,) for a scalar polynomial or (nc, dim) for one
    polynomial per component; the result is (npts,) or (npts, dim).
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    table = legendre_table(coeffs.shape[0] - 1, x)
    return table.T @ coeffs


def gauss_nodes_weights(m):
    """Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].

    Newton iteration on P_m seeded from Chebyshev angles, with the derivative
    from (1 - x^2) P_m'(x) = m (P_{m-1}(x) - x P_m(x)).  The rule is
    symmetrized so paired nodes are exact negatives.
    """
    if m < 1:
        raise ValueError(f"quadrature point count must be >= 1, got {m}")

    def _pm_and_deriv(x):
        pm1 = np.ones_like(x)
        pm = x.copy()
        for n in range(1, m):
            pm1, pm = pm, ((2 * n + 1) * x * pm - n * pm1) / (n + 1)
        return pm, m * (pm1 - x * pm) / (1.0 - x * x)

    x = np.cos(np.pi * (np.arange(1, m + 1) - 0.25) / (m + 0.5))
    for _ in range(100):
        pm, dp = _pm_and_deriv(x)
        dx = pm / dp
        x -= dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    _, dp = _pm_and_deriv(x)
    nodes = x[::-1].copy()
    weights = (2.0 / ((1.0 - x * x) * dp * dp))[::-1].copy()
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights
