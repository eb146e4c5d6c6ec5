# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled backend for the alternating nonnegative least-squares core.

Mirrors _hals_py semantics: projected Gauss-Seidel (HALS) sweeps, a
multiplicative-update fallback on divergence, max-entry early exit, and a
deterministic stall cutoff.  All loops run in C on tiny dense matrices,
where per-call overhead dominates the NumPy fallback.
"""

from libc.math cimport sqrt, INFINITY, fabs

import numpy as np

BACKEND = "cython"

cdef double _DEAD = 1e-30
cdef double _MU_EPS = 1e-12
cdef double _DIVERGE_FACTOR = 1.0 + 1e-9
cdef int _DIVERGE_LIMIT = 3


def hals_fit(const double[:, ::1] T, double[:, ::1] L, double[:, ::1] R,
             int iters, double fit_tol, int stall_window=60, double stall_rtol=1e-12):
    """Iterate L, R in place toward T ~= L @ R with nonnegative factors.

    Returns (max_residual, iters_done, switched).
    """
    cdef Py_ssize_t m = T.shape[0]
    cdef Py_ssize_t n = T.shape[1]
    cdef Py_ssize_t k = L.shape[1]
    cdef Py_ssize_t i, j, l, p, it
    cdef double g, acc, e, max_res, fro, prev_fro, best_fro
    cdef int switched = 0, diverge = 0, stall = 0

    G_arr = np.zeros((k, k))
    CR_arr = np.zeros((k, n))
    CL_arr = np.zeros((m, k))
    cdef double[:, ::1] G = G_arr
    cdef double[:, ::1] CR = CR_arr
    cdef double[:, ::1] CL = CL_arr

    max_res = _residuals(T, L, R, m, n, k, &fro)
    if max_res <= fit_tol:
        return max_res, 0, False

    prev_fro = INFINITY
    best_fro = INFINITY

    for it in range(1, iters + 1):
        if not switched:
            # G = L^T L, CR = L^T T
            for j in range(k):
                for l in range(j, k):
                    acc = 0.0
                    for i in range(m):
                        acc += L[i, j] * L[i, l]
                    G[j, l] = acc
                    G[l, j] = acc
            for j in range(k):
                for p in range(n):
                    acc = 0.0
                    for i in range(m):
                        acc += L[i, j] * T[i, p]
                    CR[j, p] = acc
            for j in range(k):
                g = G[j, j]
                if g <= _DEAD:
                    for p in range(n):
                        R[j, p] = 0.0
                    continue
                for p in range(n):
                    acc = 0.0
                    for l in range(k):
                        acc += G[j, l] * R[l, p]
                    e = R[j, p] + (CR[j, p] - acc) / g
                    R[j, p] = e if e > 0.0 else 0.0
            # G = R R^T, CL = T R^T
            for j in range(k):
                for l in range(j, k):
                    acc = 0.0
                    for p in range(n):
                        acc += R[j, p] * R[l, p]
                    G[j, l] = acc
                    G[l, j] = acc
            for i in range(m):
                for j in range(k):
                    acc = 0.0
                    for p in range(n):
                        acc += T[i, p] * R[j, p]
                    CL[i, j] = acc
            for j in range(k):
                g = G[j, j]
                if g <= _DEAD:
                    for i in range(m):
                        L[i, j] = 0.0
                    continue
                for i in range(m):
                    acc = 0.0
                    for l in range(k):
                        acc += L[i, l] * G[l, j]
                    e = L[i, j] + (CL[i, j] - acc) / g
                    L[i, j] = e if e > 0.0 else 0.0
        else:
            _multiplicative_step(T, L, R, G, CR, CL, m, n, k)

        max_res = _residuals(T, L, R, m, n, k, &fro)
        if max_res <= fit_tol:
            return max_res, it, bool(switched)

        if fro > prev_fro * _DIVERGE_FACTOR:
            diverge += 1
            if diverge >= _DIVERGE_LIMIT and not switched:
                switched = 1
                diverge = 0
        else:
            diverge = 0

        if fro >= best_fro * (1.0 - stall_rtol):
            stall += 1
            if stall >= stall_window:
                return max_res, it, bool(switched)
        else:
            stall = 0
        if fro < best_fro:
            best_fro = fro
        prev_fro = fro

    return max_res, iters, bool(switched)


cdef double _residuals(const double[:, ::1] T, double[:, ::1] L, double[:, ::1] R,
                       Py_ssize_t m, Py_ssize_t n, Py_ssize_t k, double* fro) nogil:
    cdef Py_ssize_t i, j, l
    cdef double e, acc, mx = 0.0, sq = 0.0
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for l in range(k):
                acc += L[i, l] * R[l, j]
            e = acc - T[i, j]
            if fabs(e) > mx:
                mx = fabs(e)
            sq += e * e
    fro[0] = sqrt(sq)
    return mx


cdef void _multiplicative_step(const double[:, ::1] T, double[:, ::1] L, double[:, ::1] R,
                               double[:, ::1] G, double[:, ::1] CR, double[:, ::1] CL,
                               Py_ssize_t m, Py_ssize_t n, Py_ssize_t k) nogil:
    cdef Py_ssize_t i, j, l, p
    cdef double acc, den
    # R *= (L^T T) / (L^T L R + eps)
    for j in range(k):
        for l in range(k):
            acc = 0.0
            for i in range(m):
                acc += L[i, j] * L[i, l]
            G[j, l] = acc
    for j in range(k):
        for p in range(n):
            acc = 0.0
            for i in range(m):
                acc += L[i, j] * T[i, p]
            CR[j, p] = acc
    for j in range(k):
        for p in range(n):
            den = 0.0
            for l in range(k):
                den += G[j, l] * R[l, p]
            R[j, p] = R[j, p] * CR[j, p] / (den + _MU_EPS)
    # L *= (T R^T) / (L R R^T + eps)
    for j in range(k):
        for l in range(k):
            acc = 0.0
            for p in range(n):
                acc += R[j, p] * R[l, p]
            G[j, l] = acc
    for i in range(m):
        for j in range(k):
            acc = 0.0
            for p in range(n):
                acc += T[i, p] * R[j, p]
            CL[i, j] = acc
    for i in range(m):
        for j in range(k):
            den = 0.0
            for l in range(k):
                den += L[i, l] * G[l, j]
            L[i, j] = L[i, j] * CL[i, j] / (den + _MU_EPS)
