"""Constructive nonnegative factorization with k = rank for rank <= 2.

For a nonnegative rational matrix of rank at most two, the cone spanned by
its columns inside the 2-D column space is salient (the all-ones functional
is strictly positive on every nonzero nonnegative column), hence generated
by its two angularly extreme columns.  Writing every column as a nonnegative
combination of those two generators produces an exact witness with k equal
to the rank, all in rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PreconditionError
from .matcore import ExactMatrix, rank_exact
from .nnfactor import NonnegFactorization, zero_witness


def _first_nonzero_column(T: ExactMatrix) -> int | None:
    for j in range(T.cols):
        if any(x != 0 for x in T.column(j)):
            return j
    return None


def _coords_in_basis(col, b1, b2, i1: int, i2: int, det: Fraction) -> tuple[Fraction, Fraction]:
    # Cramer solve of [b1 b2] * (x, y) = col restricted to pivot rows (i1, i2).
    x = (col[i1] * b2[i2] - col[i2] * b2[i1]) / det
    y = (b1[i1] * col[i2] - b1[i2] * col[i1]) / det
    return x, y


def factor_rank_le2(T: ExactMatrix) -> NonnegFactorization:
    """Exact witness with k = rank_exact(T) for nonnegative T of rank <= 2.

    Raises PreconditionError for float input, negative entries, or rank >= 3
    (rank-3 inputs belong to the nested-polygon solver in rank3geo).
    """
    if not isinstance(T, ExactMatrix):
        raise PreconditionError("factor_rank_le2 works on exact matrices; rationalize float input first")
    if not T.is_nonnegative():
        raise PreconditionError("matrix must be entrywise nonnegative")
    r = rank_exact(T)
    if r > 2:
        raise PreconditionError(f"rank is {r} > 2; use the rank-3 solver (nnrank --method exact3)")
    if r == 0:
        return zero_witness(T)
    if r == 1:
        return _factor_rank1(T)
    return _factor_rank2(T)


def _factor_rank1(T: ExactMatrix) -> NonnegFactorization:
    j0 = _first_nonzero_column(T)
    y = T.column(j0)
    i0 = next(i for i, v in enumerate(y) if v != 0)
    coeffs = [T.entry(i0, j) / y[i0] for j in range(T.cols)]
    L = ExactMatrix(T.rows, 1, list(y))
    R = ExactMatrix(1, T.cols, coeffs)
    F = NonnegFactorization(L, R)
    if F.product() != T:
        raise PreconditionError("input is inconsistent with rank 1 despite rank_exact = 1")
    return F


def _factor_rank2(T: ExactMatrix) -> NonnegFactorization:
    m, n = T.rows, T.cols
    cols = [T.column(j) for j in range(n)]

    jb1 = _first_nonzero_column(T)
    b1 = cols[jb1]
    i1 = next(i for i, v in enumerate(b1) if v != 0)
    jb2 = i2 = None
    for j in range(jb1 + 1, n):
        for i in range(m):
            if b1[i1] * cols[j][i] - b1[i] * cols[j][i1] != 0:
                jb2, i2 = j, i
                break
        if jb2 is not None:
            break
    b2 = cols[jb2]
    det = b1[i1] * b2[i2] - b1[i2] * b2[i1]

    # Chart coordinates of every nonzero column; the slice by the all-ones
    # functional turns the 2-D cone into a segment, so the extreme generators
    # are the parameter min and max along it.
    s1, s2 = sum(b1), sum(b2)
    coords: list[tuple[Fraction, Fraction] | None] = []
    params: list[Fraction | None] = []
    for j in range(n):
        if all(x == 0 for x in cols[j]):
            coords.append(None)
            params.append(None)
            continue
        x, y = _coords_in_basis(cols[j], b1, b2, i1, i2, det)
        lam = sum(cols[j])  # = x*s1 + y*s2 > 0 for nonzero nonnegative columns
        coords.append((x, y))
        params.append((x * (-s2) + y * s1) / lam)

    def better(j: int, best: int | None, want_min: bool) -> bool:
        if best is None:
            return True
        if params[j] != params[best]:
            return params[j] < params[best] if want_min else params[j] > params[best]
        # collinear columns collapse to the representative of largest norm
        nj = sum(v * v for v in cols[j])
        nb = sum(v * v for v in cols[best])
        return nj > nb

    ja = jb = None
    for j in range(n):
        if params[j] is None:
            continue
        if better(j, ja, want_min=True):
            ja = j
        if better(j, jb, want_min=False):
            jb = j

    xa, ya = coords[ja]
    xb, yb = coords[jb]
    delta = xa * yb - ya * xb
    if delta == 0:
        raise PreconditionError("extreme columns are collinear despite rank_exact = 2")

    r_entries = []
    for j in range(n):
        if coords[j] is None:
            r_entries.append((Fraction(0), Fraction(0)))
            continue
        x, y = coords[j]
        r1 = (x * yb - y * xb) / delta
        r2 = (xa * y - ya * x) / delta
        if r1 < 0 or r2 < 0:
            raise PreconditionError("column outside the extreme-generator cone; input not rank <= 2 nonnegative")
        r_entries.append((r1, r2))

    L = ExactMatrix(m, 2, [v for pair in zip(cols[ja], cols[jb]) for v in pair])
    R = ExactMatrix(2, n, [r_entries[j][0] for j in range(n)] + [r_entries[j][1] for j in range(n)])
    F = NonnegFactorization(L, R)
    if F.product() != T:
        raise PreconditionError("exact verification failed; input not rank <= 2")
    return F
