# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Legendre tables, series evaluation, Gauss-Legendre rules.

Mirrors the contract of ``pyref`` exactly; see that module for the math.
"""

import numpy as np

from libc.math cimport cos, fabs, M_PI


def legendre_table(int nmax, object x):
    xa = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[::1] xv = xa
    cdef Py_ssize_t npts = xv.shape[0]
    out = np.empty((nmax + 1, npts), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t q
    cdef int n
    cdef double t, pnm1, pn, pnp1
    for q in range(npts):
        t = xv[q]
        pnm1 = 1.0
        o[0, q] = 1.0
        if nmax >= 1:
            pn = t
            o[1, q] = t
            for n in range(1, nmax):
                pnp1 = ((2 * n + 1) * t * pn - n * pnm1) / (n + 1)
                o[n + 1, q] = pnp1
                pnm1 = pn
                pn = pnp1
    return out


def legendre_deriv_table(int nmax, object x):
    xa = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[::1] xv = xa
    cdef Py_ssize_t npts = xv.shape[0]
    out = np.empty((nmax + 1, npts), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t q
    cdef int n
    cdef double t, pnm1, pn, pnp1, dnm1, dn, dnp1
    for q in range(npts):
        t = xv[q]
        o[0, q] = 0.0
        if nmax >= 1:
            pnm1 = 1.0
            pn = t
            dnm1 = 0.0
            dn = 1.0
            o[1, q] = 1.0
            for n in range(1, nmax):
                dnp1 = (2 * n + 1) * pn + dnm1
                pnp1 = ((2 * n + 1) * t * pn - n * pnm1) / (n + 1)
                o[n + 1, q] = dnp1
                pnm1 = pn
                pn = pnp1
                dnm1 = dn
                dn = dnp1
    return out


def legendre_series(object coeffs, object x):
    ca = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef bint one_d = ca.ndim == 1
    if one_d:
        ca = ca[:, None]
        ca = np.ascontiguousarray(ca)
    xa = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[:, ::1] c = ca
    cdef double[::1] xv = xa
    cdef Py_ssize_t nc = c.shape[0]
    cdef Py_ssize_t dim = c.shape[1]
    cdef Py_ssize_t npts = xv.shape[0]
    out = np.empty((npts, dim), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t q, i
    cdef int n
    cdef double t, pnm1, pn, pnp1
    for q in range(npts):
        t = xv[q]
        for i in range(dim):
            o[q, i] = c[0, i]
        if nc >= 2:
            pnm1 = 1.0
            pn = t
            for i in range(dim):
                o[q, i] += c[1, i] * t
            for n in range(1, <int> nc - 1):
                pnp1 = ((2 * n + 1) * t * pn - n * pnm1) / (n + 1)
                for i in range(dim):
                    o[q, i] += c[n + 1, i] * pnp1
                pnm1 = pn
                pn = pnp1
    if one_d:
        return out.reshape(npts)
    return out


cdef double _pm_deriv(int m, double x, double* dp) noexcept:
    cdef double pnm1 = 1.0
    cdef double pn = x
    cdef double pnp1
    cdef int n
    for n in range(1, m):
        pnp1 = ((2 * n + 1) * x * pn - n * pnm1) / (n + 1)
        pnm1 = pn
        pn = pnp1
    dp[0] = m * (pnm1 - x * pn) / (1.0 - x * x)
    return pn


def gauss_nodes_weights(int m):
    if m < 1:
        raise ValueError(f"quadrature point count must be >= 1, got {m}")
    nodes = np.empty(m, dtype=np.float64)
    weights = np.empty(m, dtype=np.float64)
    cdef double[::1] xs = nodes
    cdef double[::1] ws = weights
    cdef int half = (m + 1) // 2
    cdef int i, it
    cdef double x, pm, dp, dx, w
    for i in range(half):
        x = cos(M_PI * (i + 0.75) / (m + 0.5))
        for it in range(100):
            pm = _pm_deriv(m, x, &dp)
            dx = pm / dp
            x -= dx
            if fabs(dx) <= 1e-15:
                break
        _pm_deriv(m, x, &dp)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        xs[m - 1 - i] = x
        xs[i] = -x
        ws[m - 1 - i] = w
        ws[i] = w
    return nodes, weights
