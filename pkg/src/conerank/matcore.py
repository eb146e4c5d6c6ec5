"""Exact and floating dense matrices: construction, rank, transforms, kernel sampling.

Two scalar kinds are supported.  ExactMatrix holds arbitrary-precision
rationals and backs every certification path; FloatMatrix wraps a float64
array for quadrature and heuristic paths.  Both are immutable values and safe
to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError

TWO_PI = 2.0 * math.pi


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise PreconditionError("non-finite value cannot be converted to a rational")
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational scalar")


class ExactMatrix:
    """Dense matrix over rationals, row-major, immutable.

    Zero dimensions are admitted so that empty factors (the k=0 witness of the
    zero matrix) are representable.
    """

    __slots__ = ("rows", "cols", "entries", "_nonneg")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        if rows < 0 or cols < 0:
            raise PreconditionError("matrix dimensions must be nonnegative")
        ent = tuple(_as_fraction(x) for x in entries)
        if rows * cols != len(ent):
            raise DimensionError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "_nonneg", all(x >= 0 for x in ent))

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise DimensionError("ragged rows")
        return cls(m, n, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_nonnegative(self) -> bool:
        return self._nonneg

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols, self.rows, [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)]
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        m, k, n = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [Fraction(0)] * (m * n)
        for i in range(m):
            for l in range(k):
                ail = a[i * k + l]
                if ail == 0:
                    continue
                base = l * n
                row = i * n
                for j in range(n):
                    out[row + j] += ail * b[base + j]
        return ExactMatrix(m, n, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def to_float(self) -> "FloatMatrix":
        a = np.array([float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)
        return FloatMatrix(a)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"


class FloatMatrix:
    """Dense float64 matrix; constructors reject NaN/inf."""

    __slots__ = ("data",)

    def __init__(self, data):
        a = np.array(data, dtype=float)
        if a.ndim != 2:
            raise DimensionError("FloatMatrix needs a 2-D array")
        if a.size and not np.all(np.isfinite(a)):
            raise PreconditionError("non-finite entries are not admitted")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    def __setattr__(self, name, value):
        raise AttributeError("FloatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "FloatMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise DimensionError("ragged rows")
        return cls(np.array(rows, dtype=float).reshape(m, n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FloatMatrix":
        return cls(np.zeros((rows, cols)))

    @classmethod
    def identity(cls, n: int) -> "FloatMatrix":
        return cls(np.eye(n))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[float, ...]:
        return tuple(self.data.reshape(-1).tolist())

    def is_nonnegative(self) -> bool:
        return self.data.size == 0 or bool(self.data.min() >= 0.0)

    def is_zero(self) -> bool:
        return self.data.size == 0 or bool(np.all(self.data == 0.0))

    def entry(self, i: int, j: int) -> float:
        return float(self.data[i, j])

    def transpose(self) -> "FloatMatrix":
        return FloatMatrix(self.data.T.copy())

    def __matmul__(self, other: "FloatMatrix") -> "FloatMatrix":
        if not isinstance(other, FloatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return FloatMatrix(self.data @ other.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FloatMatrix)
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def to_exact(self) -> ExactMatrix:
        """Exact rationalization of the binary float entries."""
        return ExactMatrix(self.rows, self.cols, [Fraction(x) for x in self.entries])

    def __repr__(self) -> str:
        return f"FloatMatrix({self.rows}x{self.cols})"


Matrix = ExactMatrix | FloatMatrix


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [0, 2*pi): points t_i = 2*pi*i/n + offset."""

    n: int
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("grid needs at least one sample")
        if not (0.0 <= self.offset < TWO_PI / self.n):
            raise PreconditionError(f"offset must lie in [0, 2*pi/{self.n})")

    def points(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n + self.offset

    @property
    def weight(self) -> float:
        """Quadrature weight of the uniform periodic rule."""
        return TWO_PI / self.n


def rank_exact(M: ExactMatrix) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    if not isinstance(M, ExactMatrix):
        raise PreconditionError("rank_exact needs an ExactMatrix")
    a = M.row_lists()
    m, n = M.rows, M.cols
    rank = 0
    prev = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, m):
            head = a[i][col]
            row_i, row_p = a[i], a[rank]
            for j in range(col + 1, n):
                row_i[j] = (p * row_i[j] - head * row_p[j]) / prev
            row_i[col] = Fraction(0)
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def rank_float(M: FloatMatrix, rel_tol: float = 1e-8) -> int:
    """Numeric rank: singular values above rel_tol times the largest one."""
    if not isinstance(M, FloatMatrix):
        raise PreconditionError("rank_float needs a FloatMatrix")
    if rel_tol <= 0:
        raise PreconditionError("rel_tol must be positive")
    if M.data.size == 0:
        return 0
    s = np.linalg.svd(M.data, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def sample_kernel(s_grid: GridSpec, t_grid: GridSpec) -> FloatMatrix:
    """Sample the kernel k(s, t) = 1 + cos(s - t) on the grid product.

    Entries land in [0, 2]; the matrix is symmetric when both grids agree.
    """
    s = s_grid.points()
    t = t_grid.points()
    K = 1.0 + np.cos(s[:, None] - t[None, :])
    np.clip(K, 0.0, 2.0, out=K)
    return FloatMatrix(K)


def _check_permutation(p: Sequence[int], size: int, what: str) -> tuple[int, ...]:
    p = tuple(p)
    if sorted(p) != list(range(size)):
        raise PreconditionError(f"{what} is not a permutation of range({size})")
    return p


def scale_and_permute(M: Matrix, d_left=None, d_right=None, p_left=None, p_right=None) -> Matrix:
    """Return P_left * D_left * M * D_right * P_right in M's scalar kind.

    Row i of the result is row p_left[i] of the scaled matrix; column j is
    column p_right[j].  Diagonal entries must be strictly positive, so
    nonnegativity is preserved.
    """
    m, n = M.rows, M.cols
    exact = isinstance(M, ExactMatrix)
    if d_left is None:
        d_left = [1] * m
    if d_right is None:
        d_right = [1] * n
    if p_left is None:
        p_left = range(m)
    if p_right is None:
        p_right = range(n)
    if len(d_left) != m or len(d_right) != n:
        raise DimensionError("diagonal size does not match matrix")
    p_left = _check_permutation(p_left, m, "p_left")
    p_right = _check_permutation(p_right, n, "p_right")
    if exact:
        dl = [_as_fraction(x) for x in d_left]
        dr = [_as_fraction(x) for x in d_right]
        if any(x <= 0 for x in dl + dr):
            raise PreconditionError("diagonal entries must be strictly positive")
        out = [
            dl[p_left[i]] * M.entry(p_left[i], p_right[j]) * dr[p_right[j]]
            for i in range(m)
            for j in range(n)
        ]
        return ExactMatrix(m, n, out)
    dl = np.asarray(d_left, dtype=float)
    dr = np.asarray(d_right, dtype=float)
    if np.any(dl <= 0) or np.any(dr <= 0):
        raise PreconditionError("diagonal entries must be strictly positive")
    scaled = dl[:, None] * M.data * dr[None, :]
    return FloatMatrix(scaled[np.ix_(p_left, p_right)])


def hstack(A: Matrix, B: Matrix) -> Matrix:
    if A.rows != B.rows:
        raise DimensionError("hstack needs equal row counts")
    if isinstance(A, ExactMatrix) and isinstance(B, ExactMatrix):
        return ExactMatrix(A.rows, A.cols + B.cols, [x for i in range(A.rows) for x in (*A.row(i), *B.row(i))])
    if isinstance(A, FloatMatrix) and isinstance(B, FloatMatrix):
        return FloatMatrix(np.hstack([A.data, B.data]))
    raise PreconditionError("hstack needs matching scalar kinds")


def vstack(A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.cols:
        raise DimensionError("vstack needs equal column counts")
    if isinstance(A, ExactMatrix) and isinstance(B, ExactMatrix):
        return ExactMatrix(A.rows + B.rows, A.cols, [*A.entries, *B.entries])
    if isinstance(A, FloatMatrix) and isinstance(B, FloatMatrix):
        return FloatMatrix(np.vstack([A.data, B.data]))
    raise PreconditionError("vstack needs matching scalar kinds")


def circulant(first_row: Sequence) -> ExactMatrix:
    """Exact circulant matrix with the given first row."""
    n = len(first_row)
    r = [_as_fraction(x) for x in first_row]
    return ExactMatrix(n, n, [r[(j - i) % n] for i in range(n) for j in range(n)])


def robbins_matrix() -> ExactMatrix:
    """The canonical 4x4 rank-3 matrix whose nonnegative rank is 4."""
    return ExactMatrix.from_rows(
        [
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
        ]
    )
