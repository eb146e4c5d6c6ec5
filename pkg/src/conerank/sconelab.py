"""Numerical laboratory for the rank-three cosine kernel operator.

The operator maps f to s |-> integral of f(t)*(1 + cos(s - t)) dt, so its
action is determined by the three trigonometric moments of f.  Its range
cone is order-isomorphic to the ice cream cone {c >= sqrt(a^2 + b^2)}, and
every strict-interior point is hit by an explicit two-bump Poisson-kernel
preimage.  Discretizing the kernel on aligned grids produces the growth
experiment: numeric rank stays 3 while the certified nonnegative rank climbs
with the grid size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .fileio import format_sig
from .matcore import GridSpec, rank_float, sample_kernel
from .nmf import DEFAULT_FIT_TOL, DEFAULT_RESTARTS, min_k_search, search_upper
from .rank3geo import RECONCILE_ITERS, nnrank_rank3

_R_MARGIN = 1e-6  # keep r away from R/c so the two Poisson bumps stay separated


@dataclass(frozen=True)
class GridFunction:
    """Real values sampled on a uniform periodic grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size != self.grid.n:
            raise PreconditionError("values must be a vector of length grid.n")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("grid function values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, fn, grid: GridSpec) -> "GridFunction":
        return cls(grid, np.asarray(fn(grid.points()), dtype=float))


@dataclass(frozen=True)
class IceCreamPoint:
    """Coordinates (a, b, c) in the moment chart of the operator's range."""

    a: float
    b: float
    c: float

    @property
    def radius(self) -> float:
        return math.hypot(self.a, self.b)

    @property
    def angle(self) -> float:
        # theta defaults to 0 on the cone axis (a = b = 0) for determinism
        return math.atan2(self.b, self.a) if (self.a, self.b) != (0.0, 0.0) else 0.0

    @property
    def margin(self) -> float:
        """c - sqrt(a^2 + b^2); also the exact minimum of a*cos + b*sin + c."""
        return self.c - self.radius

    def is_zero(self) -> bool:
        return self.a == 0.0 and self.b == 0.0 and self.c == 0.0


@dataclass(frozen=True)
class PoissonParams:
    """Parameters of the two-atom Poisson preimage of an interior point."""

    r: float
    theta: float
    alpha: float
    c: float

    def __post_init__(self):
        if not (0.0 < self.r < 1.0):
            raise PreconditionError("r must lie in (0, 1)")
        if not (0.0 <= self.alpha <= math.pi / 2):
            raise PreconditionError("alpha must lie in [0, pi/2]")
        if self.c <= 0.0:
            raise PreconditionError("c must be positive")


@dataclass(frozen=True)
class Membership:
    region: str  # "inside" | "boundary" | "outside"
    margin: float


def moments(f: GridFunction) -> IceCreamPoint:
    """Quadrature moments (a, b, c) against cos, sin, 1 with uniform weights.

    Exact for trigonometric polynomials of degree < n - 1.
    """
    if f.grid.n < 3:
        raise PreconditionError("moments need a grid with at least 3 samples")
    t = f.grid.points()
    w = f.grid.weight
    return IceCreamPoint(
        a=float(w * np.sum(f.values * np.cos(t))),
        b=float(w * np.sum(f.values * np.sin(t))),
        c=float(w * np.sum(f.values)),
    )


def apply_S(f: GridFunction, out_grid: GridSpec | None = None) -> GridFunction:
    """Image of f under the kernel operator: a*cos(s) + b*sin(s) + c."""
    p = moments(f)
    grid = out_grid if out_grid is not None else f.grid
    s = grid.points()
    return GridFunction(grid, p.a * np.cos(s) + p.b * np.sin(s) + p.c)


def cone_membership(p: IceCreamPoint, eps: float = 0.0) -> Membership:
    """Classify p against the ice cream cone by the margin c - sqrt(a^2+b^2)."""
    if eps < 0:
        raise PreconditionError("eps must be nonnegative")
    m = p.margin
    if m > eps:
        region = "inside"
    elif m < -eps:
        region = "outside"
    else:
        region = "boundary"
    return Membership(region=region, margin=m)


def poisson_kernel(r: float, t):
    """P_r(t) = (1 - r^2) / (1 - 2 r cos t + r^2); nonnegative and even."""
    if not (0.0 < r < 1.0):
        raise PreconditionError("Poisson parameter r must lie in (0, 1)")
    tt = np.asarray(t, dtype=float)
    out = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(tt) + r * r)
    return float(out) if np.isscalar(t) or out.ndim == 0 else out


def poisson_params(p: IceCreamPoint, r: float | None = None) -> PoissonParams:
    """Derive (r, theta, alpha, c) for the two-bump preimage of an interior point.

    Requires the strict interior c > sqrt(a^2 + b^2); r defaults to the
    midpoint (R/c + 1)/2 of its admissible interval (R/c, 1).
    """
    if p.is_zero():
        raise PreconditionError("the zero point is handled separately (zero preimage)")
    R = p.radius
    if p.margin <= 0.0:
        raise PreconditionError(
            "boundary or exterior point has no nonnegative preimage; the image cone is the strict interior c > sqrt(a^2+b^2) plus the origin"
        )
    ratio = R / p.c
    if r is None:
        r = (ratio + 1.0) / 2.0
    if r >= 1.0:
        raise PreconditionError("r must be strictly below 1")
    if r < ratio + _R_MARGIN:
        raise PreconditionError(f"r = {r} too close to R/c = {ratio}; need r >= R/c + {_R_MARGIN}")
    alpha = math.acos(ratio / r)
    return PoissonParams(r=r, theta=p.angle, alpha=alpha, c=p.c)


def poisson_preimage(p: IceCreamPoint, r: float | None = None, out_grid: GridSpec | None = None) -> GridFunction:
    """Nonnegative sampled preimage with moments (a, b, c).

    f(t) = (c / 4 pi) * [P_r(t - theta + alpha) + P_r(t - theta - alpha)]
    with cos(alpha) = R / (c r); the zero point maps to the zero function.
    """
    grid = out_grid if out_grid is not None else GridSpec(512)
    if p.is_zero():
        return GridFunction(grid, np.zeros(grid.n))
    par = poisson_params(p, r)
    t = grid.points()
    vals = (par.c / (4.0 * math.pi)) * (
        poisson_kernel(par.r, t - par.theta + par.alpha) + poisson_kernel(par.r, t - par.theta - par.alpha)
    )
    return GridFunction(grid, vals)


@dataclass(frozen=True)
class GrowthRow:
    """One grid size of the discretization growth experiment."""

    n: int
    rank_float: int
    k_exact3: int | None
    k_nmf: int | None
    residual_at_k_minus_1: float | None

    def csv_fields(self) -> list[str]:
        return [
            str(self.n),
            str(self.rank_float),
            "" if self.k_exact3 is None else str(self.k_exact3),
            "" if self.k_nmf is None else str(self.k_nmf),
            "" if self.residual_at_k_minus_1 is None else format_sig(self.residual_at_k_minus_1),
        ]


GROWTH_CSV_HEADER = "n,rank_float,k_exact3,k_nmf,residual_at_k_minus_1"


def growth_experiment(
    n_list: Iterable[int],
    offset: float = 0.0,
    methods: Sequence[str] = ("exact3", "nmf"),
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    fit_tol: float = DEFAULT_FIT_TOL,
    iters: int = RECONCILE_ITERS,
    rel_tol: float = 1e-8,
) -> list[GrowthRow]:
    """Sample the kernel on aligned n-grids and measure rank against nonnegative rank.

    The numeric rank stays 3 for every n >= 3 while the certified k grows;
    per-n values are artifact measurements, not paper-derived constants.
    """
    for m in methods:
        if m not in ("exact3", "nmf"):
            raise PreconditionError(f"unknown growth method {m!r}")
    rows = []
    for n in sorted(set(int(n) for n in n_list)):
        if n < 3:
            raise PreconditionError("growth experiment needs n >= 3")
        grid = GridSpec(n, offset)
        K = sample_kernel(grid, grid)
        rf = rank_float(K, rel_tol)
        k_exact = (
            nnrank_rank3(K, rel_tol, seed=seed, restarts=restarts, iters=iters).k
            if "exact3" in methods
            else None
        )
        k_nmf = None
        if "nmf" in methods:
            scan = min_k_search(K, 3, min(K.rows, K.cols), restarts=restarts, seed=seed, fit_tol=fit_tol, iters=iters)
            k_nmf = scan.k_best
        k_ref = k_exact if k_exact is not None else k_nmf
        res_below = None
        if "nmf" in methods and k_ref is not None and k_ref - 1 >= 3:
            res_below = search_upper(
                K, k_ref - 1, restarts=restarts, seed=seed, fit_tol=fit_tol, iters=iters
            ).residual
        rows.append(
            GrowthRow(n=n, rank_float=rf, k_exact3=k_exact, k_nmf=k_nmf, residual_at_k_minus_1=res_below)
        )
    return rows


def growth_rows_to_csv(rows: Sequence[GrowthRow]) -> str:
    lines = [GROWTH_CSV_HEADER]
    lines.extend(",".join(r.csv_fields()) for r in rows)
    return "\n".join(lines) + "\n"
