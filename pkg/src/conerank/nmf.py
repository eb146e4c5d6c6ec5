"""Heuristic upper-bound search for the nonnegative rank.

Multi-restart alternating nonnegative least squares with a multiplicative
fallback, seeded by a counter-based generator so that runs are reproducible
bit-for-bit at the report level.  A failed search is evidence, never a
certified lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .matcore import ExactMatrix, FloatMatrix, Matrix
from .nnfactor import NonnegFactorization, verify, zero_witness

DEFAULT_RESTARTS = 64
DEFAULT_ITERS = 500
DEFAULT_FIT_TOL = 1e-9


@dataclass(frozen=True)
class SearchResult:
    """Outcome of search_upper at a fixed inner dimension k."""

    k: int
    found: bool
    residual: float  # max-entry residual of the successful (or best failed) restart
    witness: NonnegFactorization | None
    restart_index: int | None
    backend: str

    def report(self) -> dict:
        return {
            "k": self.k,
            "found": self.found,
            "residual": float(f"{self.residual:.12g}"),
            "restart_index": self.restart_index,
        }


@dataclass(frozen=True)
class MinKResult:
    """Outcome of the upward scan: smallest k that fit, or None."""

    k_best: int | None
    witness: NonnegFactorization | None
    residuals: dict[int, float]  # best residual per scanned k


def _as_float_array(T: Matrix) -> np.ndarray:
    if isinstance(T, ExactMatrix):
        T = T.to_float()
    if not isinstance(T, FloatMatrix):
        raise PreconditionError("search needs a matrix input")
    if not T.is_nonnegative():
        raise PreconditionError("matrix must be entrywise nonnegative")
    return np.array(T.data, dtype=float)


def _init_factors(m: int, n: int, k: int, mean: float, seed: int, restart: int):
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, restart], dtype=np.uint64)))
    scale = math.sqrt(mean / k) if mean > 0 else 1.0
    # 1 - U gives entries in (0, 1]
    L = (1.0 - gen.random((m, k))) * scale
    R = (1.0 - gen.random((k, n))) * scale
    return np.ascontiguousarray(L), np.ascontiguousarray(R)


def search_upper(
    T: Matrix,
    k: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    fit_tol: float = DEFAULT_FIT_TOL,
    iters: int = DEFAULT_ITERS,
) -> SearchResult:
    """Look for a k-term nonnegative fit of T; deterministic in (seed, restarts, iters).

    Success means some restart reached max-entry residual <= fit_tol; the
    returned witness is clamped nonnegative and re-verified at 2*fit_tol.
    Restarts are scanned in index order, so the first success wins.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if restarts < 1:
        raise PreconditionError("restarts must be at least 1")
    if fit_tol <= 0:
        raise PreconditionError("fit_tol must be positive")
    A = _as_float_array(T)
    m, n = A.shape

    if not A.any():
        W = NonnegFactorization(FloatMatrix(np.zeros((m, k))), FloatMatrix(np.zeros((k, n))))
        return SearchResult(k=k, found=True, residual=0.0, witness=W, restart_index=0, backend=_kernels.BACKEND)

    mean = float(A.mean())
    best = math.inf
    for r in range(restarts):
        L, R = _init_factors(m, n, k, mean, seed, r)
        max_res, _, _ = _kernels.hals_fit(A, L, R, iters, fit_tol)
        if max_res <= fit_tol:
            W = NonnegFactorization(FloatMatrix(np.maximum(L, 0.0)), FloatMatrix(np.maximum(R, 0.0)))
            target = T if isinstance(T, FloatMatrix) else FloatMatrix(A)
            if not verify(target, W, 2.0 * fit_tol):
                raise PreconditionError("internal: witness failed verification at 2*fit_tol")
            return SearchResult(k=k, found=True, residual=max_res, witness=W, restart_index=r, backend=_kernels.BACKEND)
        best = min(best, max_res)
    return SearchResult(k=k, found=False, residual=best, witness=None, restart_index=None, backend=_kernels.BACKEND)


def min_k_search(
    T: Matrix,
    k_lo: int,
    k_hi: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    fit_tol: float = DEFAULT_FIT_TOL,
    iters: int = DEFAULT_ITERS,
) -> MinKResult:
    """Smallest k in [k_lo, k_hi] with a successful fit, by upward linear scan.

    The zero matrix fits at any k with zero factors and returns k_lo.
    """
    if k_lo > k_hi:
        raise PreconditionError("k_lo must not exceed k_hi")
    A = _as_float_array(T)
    if not A.any():
        m, n = A.shape
        if k_lo == 0:
            return MinKResult(k_best=0, witness=zero_witness(FloatMatrix(A)), residuals={0: 0.0})
        W = NonnegFactorization(FloatMatrix(np.zeros((m, k_lo))), FloatMatrix(np.zeros((k_lo, n))))
        return MinKResult(k_best=k_lo, witness=W, residuals={k_lo: 0.0})
    residuals: dict[int, float] = {}
    for k in range(max(k_lo, 1), k_hi + 1):
        res = search_upper(T, k, restarts=restarts, seed=seed, fit_tol=fit_tol, iters=iters)
        residuals[k] = res.residual
        if res.found:
            return MinKResult(k_best=k, witness=res.witness, residuals=residuals)
    return MinKResult(k_best=None, witness=None, residuals=residuals)
