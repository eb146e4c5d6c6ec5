"""Factorization witnesses and the algebraic laws they transport.

A NonnegFactorization (L, R) with inner dimension k certifies that the
nonnegative rank of T = L*R is at most k.  Witnesses always store both
factors so that every claim above the rank lower bound stays checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError
from .matcore import ExactMatrix, FloatMatrix, Matrix, hstack, rank_exact, rank_float, vstack

DEFAULT_VERIFY_TOL = 1e-9


@dataclass(frozen=True)
class RankBounds:
    """Certified bracket [lower, upper] for the nonnegative rank.

    reference_upper is the literature bound ceil(6*min(m,n)/7), reported as
    informational metadata only and never used as a certified upper bound.
    """

    lower: int
    upper: int
    reference_upper: int

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper):
            raise PreconditionError("bounds must satisfy 0 <= lower <= upper")


class NonnegFactorization:
    """Pair of entrywise-nonnegative factors L (m x k) and R (k x n).

    k = 0 is permitted and witnesses the zero matrix (empty factors).
    """

    __slots__ = ("L", "R")

    def __init__(self, L: Matrix, R: Matrix, clamp_tol: float = 0.0):
        if isinstance(L, ExactMatrix) != isinstance(R, ExactMatrix):
            raise PreconditionError("factors must share a scalar kind")
        if L.cols != R.rows:
            raise DimensionError(f"inner dimensions differ: L is {L.shape}, R is {R.shape}")
        if isinstance(L, FloatMatrix) and clamp_tol > 0.0:
            L, R = _clamp(L, clamp_tol), _clamp(R, clamp_tol)
        if not L.is_nonnegative() or not R.is_nonnegative():
            raise PreconditionError("factors must be entrywise nonnegative")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "R", R)

    def __setattr__(self, name, value):
        raise AttributeError("NonnegFactorization is immutable")

    @property
    def k(self) -> int:
        return self.L.cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.L.rows, self.R.cols)

    def is_exact(self) -> bool:
        return isinstance(self.L, ExactMatrix)

    def product(self) -> Matrix:
        return self.L @ self.R

    def __repr__(self) -> str:
        kind = "rational" if self.is_exact() else "float"
        return f"NonnegFactorization(k={self.k}, shape={self.shape}, {kind})"


def _clamp(M: FloatMatrix, tol: float) -> FloatMatrix:
    a = M.data
    if a.size == 0 or a.min() >= 0.0:
        return M
    if a.min() < -tol:
        raise PreconditionError(f"factor entry {a.min()} below -{tol}")
    return FloatMatrix(np.maximum(a, 0.0))


def _check_nonneg(M: Matrix, what: str) -> None:
    if not M.is_nonnegative():
        raise PreconditionError(f"{what} must be entrywise nonnegative")


def verify(T: Matrix, F: NonnegFactorization, tol: float = DEFAULT_VERIFY_TOL) -> bool:
    """Check that F witnesses T.

    Rational kind (T and F both exact): L*R = T entrywise exactly.
    Otherwise: max-entry |L*R - T| <= tol.  Factor nonnegativity is enforced
    at construction and re-checked here.
    """
    if F.shape != T.shape:
        raise DimensionError(f"witness shape {F.shape} does not match matrix {T.shape}")
    if not F.L.is_nonnegative() or not F.R.is_nonnegative():
        return False
    if isinstance(T, ExactMatrix) and F.is_exact():
        return F.product() == T
    Tf = T.to_float() if isinstance(T, ExactMatrix) else T
    Lf = F.L.to_float() if F.is_exact() else F.L
    Rf = F.R.to_float() if F.is_exact() else F.R
    if Tf.data.size == 0:
        return True
    return bool(np.abs(Lf.data @ Rf.data - Tf.data).max() <= tol)


def residual(T: Matrix, F: NonnegFactorization) -> float:
    """Max-entry residual |L*R - T| on the float view."""
    Tf = T.to_float() if isinstance(T, ExactMatrix) else T
    Lf = F.L.to_float() if F.is_exact() else F.L
    Rf = F.R.to_float() if F.is_exact() else F.R
    if Tf.data.size == 0:
        return 0.0
    return float(np.abs(Lf.data @ Rf.data - Tf.data).max())


def bounds(T: Matrix, rel_tol: float = 1e-8) -> RankBounds:
    """Rank lower bound and min-dimension upper bound for a nonnegative matrix."""
    _check_nonneg(T, "matrix")
    lower = rank_exact(T) if isinstance(T, ExactMatrix) else rank_float(T, rel_tol)
    upper = 0 if T.is_zero() else min(T.rows, T.cols)
    reference = math.ceil(6 * min(T.rows, T.cols) / 7)
    return RankBounds(lower=lower, upper=upper, reference_upper=reference)


def trivial_witness(T: Matrix) -> NonnegFactorization:
    """The k = min(m, n) witness (I, T) or (T, I); exact for exact input."""
    _check_nonneg(T, "matrix")
    exact = isinstance(T, ExactMatrix)
    ident = ExactMatrix.identity if exact else FloatMatrix.identity
    if T.rows <= T.cols:
        return NonnegFactorization(ident(T.rows), T)
    return NonnegFactorization(T, ident(T.cols))


def zero_witness(T: Matrix) -> NonnegFactorization:
    """The k = 0 witness of the zero matrix."""
    if not T.is_zero():
        raise PreconditionError("k = 0 witnesses only the zero matrix")
    if isinstance(T, ExactMatrix):
        return NonnegFactorization(ExactMatrix.zeros(T.rows, 0), ExactMatrix.zeros(0, T.cols))
    return NonnegFactorization(FloatMatrix.zeros(T.rows, 0), FloatMatrix.zeros(0, T.cols))


def transpose_witness(F: NonnegFactorization) -> NonnegFactorization:
    """Witness for the transpose, same k: (R^T, L^T)."""
    return NonnegFactorization(F.R.transpose(), F.L.transpose())


def product_witness(F_A: NonnegFactorization, F_B: NonnegFactorization) -> NonnegFactorization:
    """Witness for B*A from witnesses of A and B, with k = min(k_A, k_B).

    A maps X -> Y and B maps Y -> Z, so F_B.R must compose with F_A.L.
    """
    if F_B.shape[1] != F_A.shape[0]:
        raise DimensionError(f"cannot compose B {F_B.shape} with A {F_A.shape}")
    bridge = F_B.R @ F_A.L  # k_B x k_A, nonnegative by closure
    if F_A.k <= F_B.k:
        return NonnegFactorization(F_B.L @ bridge, F_A.R)
    return NonnegFactorization(F_B.L, bridge @ F_A.R)


def sum_witness(F_A: NonnegFactorization, F_B: NonnegFactorization) -> NonnegFactorization:
    """Witness for A + B by block concatenation, k = k_A + k_B."""
    if F_A.shape != F_B.shape:
        raise DimensionError(f"summand shapes differ: {F_A.shape} vs {F_B.shape}")
    return NonnegFactorization(hstack(F_A.L, F_B.L), vstack(F_A.R, F_B.R))


def sandwich_witness(F_T: NonnegFactorization, A: Matrix | None = None, B: Matrix | None = None) -> NonnegFactorization:
    """Witness for B*T*A with k unchanged: (B*L_T, R_T*A).

    A pre-composes (n x p) and B post-composes (q x m); identity when omitted.
    """
    L, R = F_T.L, F_T.R
    if A is not None:
        _check_nonneg(A, "pre-factor A")
        R = R @ A
    if B is not None:
        _check_nonneg(B, "post-factor B")
        L = B @ L
    return NonnegFactorization(L, R)
