"""Pure-NumPy backend for the alternating nonnegative least-squares core.

Semantics are shared with the compiled backend in _hals_cy: projected
Gauss-Seidel (HALS) sweeps over the rows of R and the columns of L, a switch
to multiplicative updates when the Frobenius residual diverges, an early exit
on max-entry fit, and a deterministic stall cutoff.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_DEAD = 1e-30  # Gram diagonal below this marks a dead component
_MU_EPS = 1e-12  # multiplicative-update denominator guard
_DIVERGE_FACTOR = 1.0 + 1e-9
_DIVERGE_LIMIT = 3


def hals_fit(T, L, R, iters, fit_tol, stall_window=60, stall_rtol=1e-12):
    """Iterate L, R in place toward T ~= L @ R with nonnegative factors.

    Returns (max_residual, iters_done, switched) where switched reports
    whether the multiplicative fallback was engaged.
    """
    k = L.shape[1]
    max_res = _max_residual(T, L, R)
    if max_res <= fit_tol:
        return max_res, 0, False

    switched = False
    diverge = 0
    stall = 0
    prev_fro = math.inf
    best_fro = math.inf

    for it in range(1, iters + 1):
        if not switched:
            G = L.T @ L
            C = L.T @ T
            for j in range(k):
                g = G[j, j]
                if g <= _DEAD:
                    R[j, :] = 0.0
                    continue
                R[j, :] += (C[j] - G[j] @ R) / g
                np.maximum(R[j], 0.0, out=R[j])
            G = R @ R.T
            C = T @ R.T
            for j in range(k):
                g = G[j, j]
                if g <= _DEAD:
                    L[:, j] = 0.0
                    continue
                L[:, j] += (C[:, j] - L @ G[:, j]) / g
                np.maximum(L[:, j], 0.0, out=L[:, j])
        else:
            R *= (L.T @ T) / (L.T @ L @ R + _MU_EPS)
            L *= (T @ R.T) / (L @ (R @ R.T) + _MU_EPS)

        E = L @ R - T
        max_res = float(np.abs(E).max())
        fro = float(math.sqrt((E * E).sum()))
        if max_res <= fit_tol:
            return max_res, it, switched

        if fro > prev_fro * _DIVERGE_FACTOR:
            diverge += 1
            if diverge >= _DIVERGE_LIMIT and not switched:
                switched = True
                diverge = 0
        else:
            diverge = 0

        if fro >= best_fro * (1.0 - stall_rtol):
            stall += 1
            if stall >= stall_window:
                return max_res, it, switched
        else:
            stall = 0
        best_fro = min(best_fro, fro)
        prev_fro = fro

    return max_res, iters, switched


def _max_residual(T, L, R):
    if T.size == 0:
        return 0.0
    return float(np.abs(L @ R - T).max())
