"""Nonnegative rank of rank-3 nonnegative matrices via nested polygons.

Columns of a rank-3 nonnegative matrix, normalized to unit column sum, live
in a 2-D affine slice of the column space; each row contributes a half-plane
(the slice of "coordinate i >= 0").  The minimum vertex count of a convex
polygon nested between the convex hull of the normalized columns and the
intersection of the half-planes is the RESTRICTED nonnegative rank: the
smallest k over factorizations whose left factor stays inside the column
space.  Feasibility for a candidate k is decided by a greedy supporting-chain
sweep over boundary starting positions; every positive answer is certified by
an explicit containment check (and re-checked in exact arithmetic for
rational inputs), so false positives are impossible.

The restricted and plain nonnegative ranks agree up to k = 4: a k = 3
factorization forces the left factor's columns into the column space, so
triangle infeasibility is a true lower bound.  From k = 5 on they can differ
(the aligned cosine-kernel matrix at n = 6 has planar minimum 6 but a
verified factorization with k = 5 whose left factor leaves the column
space), so nnrank_rank3 reconciles the polygon answer downward against
seeded, verified alternating-least-squares witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError
from .matcore import ExactMatrix, FloatMatrix, Matrix, rank_exact, rank_float
from .nnfactor import NonnegFactorization, trivial_witness, verify

GEOM_SLACK = 1e-9  # module tolerance for containment slack
SWEEP_STARTS = 720
REFINE_WIDTH = 1e-12
_EXACT_SLACK = Fraction(1, 10**9)

Point = tuple[float, float]
HalfPlane = tuple[float, float, float]  # u*x + v*y + w >= 0, with u^2 + v^2 = 1


@dataclass(frozen=True)
class PolygonWitness:
    """Convex polygon (ccw) nested between the inner hull and the outer region."""

    vertices: tuple[Point, ...]

    @property
    def k(self) -> int:
        return len(self.vertices)


@dataclass
class NestedPolygonInstance:
    """Planar reduction of a rank-3 nonnegative matrix.

    inner/outer hold the deduplicated chart points and normalized half-planes
    used by the float sweep; the *_exact twins (present for rational input)
    drive exact contact detection and final witness re-verification.  The
    remaining fields carry the slice metadata needed to lift a polygon back
    to a matrix factorization.
    """

    inner: list[Point]
    outer: list[HalfPlane]
    contacts: list[int]
    inner_exact: list[tuple[Fraction, Fraction]] | None
    outer_exact: list[tuple[Fraction, Fraction, Fraction]] | None
    basis: np.ndarray  # (kept_rows, 3): lift of chart (x, y) -> x*w1 + y*w2 + (1-x-y)*w3
    col_coords: list[Point | None]  # per original column; None for zero columns
    col_sums: list[float]
    kept_rows: list[int]
    shape: tuple[int, int]


@dataclass(frozen=True)
class Rank3Result:
    """Nonnegative rank answer for a rank-3 matrix.

    k is the smallest inner dimension with a verified witness; k_restricted
    is the planar nested-polygon minimum (equal to k whenever k <= 4, and an
    upper bound otherwise).  method records whether k came from the polygon
    alone or was reconciled downward by a verified least-squares witness.
    """

    k: int
    witness: NonnegFactorization
    polygon: PolygonWitness
    instance: NestedPolygonInstance
    k_restricted: int
    method: str  # "polygon" | "polygon+nmf"


# ---------------------------------------------------------------------------
# slice construction


def _exact_pivot_rows(cols: list[tuple[Fraction, ...]]) -> list[int]:
    """Row indices making the (rows x 3) basis matrix invertible, by exact elimination."""
    m = len(cols[0])
    work = [[cols[0][i], cols[1][i], cols[2][i]] for i in range(m)]
    order = list(range(m))
    pivots = []
    r = 0
    for c in range(3):
        piv = next((i for i in range(r, m) if work[i][c] != 0), None)
        if piv is None:
            raise PreconditionError("basis columns are dependent; rank < 3")
        work[r], work[piv] = work[piv], work[r]
        order[r], order[piv] = order[piv], order[r]
        for i in range(r + 1, m):
            if work[i][c] != 0:
                f = work[i][c] / work[r][c]
                for j in range(c, 3):
                    work[i][j] -= f * work[r][j]
        pivots.append(order[r])
        r += 1
    return pivots


def _solve3_exact(w1, w2, w3, rhs, rows) -> tuple[Fraction, Fraction, Fraction]:
    i1, i2, i3 = rows
    a = [
        [w1[i1], w2[i1], w3[i1]],
        [w1[i2], w2[i2], w3[i2]],
        [w1[i3], w2[i3], w3[i3]],
    ]
    b = [rhs[i1], rhs[i2], rhs[i3]]

    def det3(mat):
        return (
            mat[0][0] * (mat[1][1] * mat[2][2] - mat[1][2] * mat[2][1])
            - mat[0][1] * (mat[1][0] * mat[2][2] - mat[1][2] * mat[2][0])
            + mat[0][2] * (mat[1][0] * mat[2][1] - mat[1][1] * mat[2][0])
        )

    d = det3(a)
    if d == 0:
        raise PreconditionError("degenerate basis in slice computation")
    sols = []
    for c in range(3):
        mod = [row[:] for row in a]
        for r in range(3):
            mod[r][c] = b[r]
        sols.append(det3(mod) / d)
    return tuple(sols)


def _dedupe_points(points: list[Point], tol: float) -> tuple[list[Point], list[int]]:
    """Collapse near-duplicates; returns (unique points, index of each input)."""
    unique: list[Point] = []
    index = []
    for p in points:
        hit = None
        for q_i, q in enumerate(unique):
            if abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol:
                hit = q_i
                break
        if hit is None:
            unique.append(p)
            index.append(len(unique) - 1)
        else:
            index.append(hit)
    return unique, index


def projective_slice(T: Matrix) -> NestedPolygonInstance:
    """Planar nested-polygon instance of a rank-3 nonnegative matrix.

    Zero rows and columns are stripped first; columns are normalized to unit
    column sum and expressed in barycentric coordinates with respect to the
    first three independent normalized columns.
    """
    if not T.is_nonnegative():
        raise PreconditionError("matrix must be entrywise nonnegative")
    if T.is_zero():
        raise PreconditionError("the zero matrix has no rank-3 slice")
    exact = isinstance(T, ExactMatrix)
    rank = rank_exact(T) if exact else rank_float(T)
    if rank != 3:
        raise PreconditionError(f"projective_slice needs rank 3, got rank {rank}")
    return _slice_exact(T) if exact else _slice_float(T)


def _slice_exact(T: ExactMatrix) -> NestedPolygonInstance:
    m, n = T.rows, T.cols
    kept_rows = [i for i in range(m) if any(T.entry(i, j) != 0 for j in range(n))]
    cols = []
    sums = []
    for j in range(n):
        col = tuple(T.entry(i, j) for i in kept_rows)
        s = sum(col)
        sums.append(s)
        cols.append(None if s == 0 else tuple(x / s for x in col))

    basis_idx: list[int] = []
    for j, col in enumerate(cols):
        if col is None:
            continue
        cand = basis_idx + [j]
        probe = ExactMatrix(len(kept_rows), len(cand), [cols[jj][i] for i in range(len(kept_rows)) for jj in cand])
        if rank_exact(probe) == len(cand):
            basis_idx.append(j)
        if len(basis_idx) == 3:
            break
    if len(basis_idx) < 3:
        raise PreconditionError("columns span less than 3 dimensions; rank < 3")
    w1, w2, w3 = (cols[j] for j in basis_idx)
    pivots = _exact_pivot_rows([w1, w2, w3])

    coords_exact: list[tuple[Fraction, Fraction] | None] = []
    for col in cols:
        if col is None:
            coords_exact.append(None)
            continue
        b1, b2, b3 = _solve3_exact(w1, w2, w3, col, pivots)
        if b1 + b2 + b3 != 1:
            raise PreconditionError("column not in the affine slice; matrix is not rank 3")
        coords_exact.append((b1, b2))

    outer_exact = []
    for idx in range(len(kept_rows)):
        u = w1[idx] - w3[idx]
        v = w2[idx] - w3[idx]
        w = w3[idx]
        if u == 0 and v == 0:
            continue  # vacuous: lifted coordinate equals w3[idx] >= 0
        outer_exact.append((u, v, w))

    nz = [c for c in coords_exact if c is not None]
    uniq_exact: list[tuple[Fraction, Fraction]] = []
    for c in nz:
        if c not in uniq_exact:
            uniq_exact.append(c)
    inner = [(float(x), float(y)) for (x, y) in uniq_exact]
    outer = [_normalize_halfplane(float(u), float(v), float(w)) for (u, v, w) in outer_exact]
    contacts = [
        i
        for i, (x, y) in enumerate(uniq_exact)
        if any(u * x + v * y + w == 0 for (u, v, w) in outer_exact)
    ]
    basis = np.array([[float(w1[i]), float(w2[i]), float(w3[i])] for i in range(len(kept_rows))])
    return NestedPolygonInstance(
        inner=inner,
        outer=outer,
        contacts=contacts,
        inner_exact=uniq_exact,
        outer_exact=outer_exact,
        basis=basis,
        col_coords=[None if c is None else (float(c[0]), float(c[1])) for c in coords_exact],
        col_sums=[float(s) for s in sums],
        kept_rows=kept_rows,
        shape=(m, n),
    )


def _slice_float(T: FloatMatrix) -> NestedPolygonInstance:
    A = T.data
    m, n = A.shape
    kept_rows = [i for i in range(m) if np.any(A[i] != 0.0)]
    B = A[kept_rows, :]
    sums = B.sum(axis=0)
    nonzero_cols = [j for j in range(n) if np.any(B[:, j] != 0.0)]
    C = np.zeros_like(B)
    for j in nonzero_cols:
        C[:, j] = B[:, j] / sums[j]

    basis_idx = _greedy_basis(C[:, nonzero_cols])
    basis_idx = [nonzero_cols[j] for j in basis_idx]
    W = C[:, basis_idx]  # (m', 3)

    beta, res, _, _ = np.linalg.lstsq(W, C[:, nonzero_cols], rcond=None)
    recon = W @ beta
    err = np.abs(recon - C[:, nonzero_cols]).max() if beta.size else 0.0
    if err > 1e-7:
        raise PreconditionError("columns do not fit a 3-dimensional slice; numeric rank is not 3")

    col_coords: list[Point | None] = [None] * n
    for pos, j in enumerate(nonzero_cols):
        col_coords[j] = (float(beta[0, pos]), float(beta[1, pos]))

    outer = []
    for idx in range(len(kept_rows)):
        u = W[idx, 0] - W[idx, 2]
        v = W[idx, 1] - W[idx, 2]
        w = W[idx, 2]
        if math.hypot(u, v) <= 1e-12 * max(1.0, abs(w)):
            continue
        outer.append(_normalize_halfplane(u, v, w))

    pts = [col_coords[j] for j in nonzero_cols]
    scale = max(max(abs(x), abs(y)) for x, y in pts)
    inner, _ = _dedupe_points(pts, tol=1e-12 * max(1.0, scale))
    contacts = [
        i
        for i, (x, y) in enumerate(inner)
        if any(abs(u * x + v * y + w) <= GEOM_SLACK for (u, v, w) in outer)
    ]
    return NestedPolygonInstance(
        inner=inner,
        outer=outer,
        contacts=contacts,
        inner_exact=None,
        outer_exact=None,
        basis=W.copy(),
        col_coords=col_coords,
        col_sums=[float(s) for s in sums],
        kept_rows=kept_rows,
        shape=(m, n),
    )


def _greedy_basis(C: np.ndarray) -> list[int]:
    """Three column indices with maximal successive orthogonal residuals."""
    work = C.copy()
    chosen = []
    for _ in range(3):
        norms = np.linalg.norm(work, axis=0)
        j = int(np.argmax(norms))
        if norms[j] <= 1e-12:
            raise PreconditionError("columns span less than 3 dimensions; numeric rank < 3")
        chosen.append(j)
        q = work[:, j] / norms[j]
        work = work - np.outer(q, q @ work)
    return chosen


def _normalize_halfplane(u: float, v: float, w: float) -> HalfPlane:
    h = math.hypot(u, v)
    return (u / h, v / h, w / h)


# ---------------------------------------------------------------------------
# planar primitives


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: list[Point]) -> list[Point]:
    """Andrew monotone chain; returns ccw vertices, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _polygon_area2(pts: list[Point]) -> float:
    return sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(pts, pts[1:] + pts[:1]))


def halfplane_polygon(outer: list[HalfPlane]) -> list[Point]:
    """Vertices (ccw) of the bounded intersection of normalized half-planes."""
    angles = sorted(math.atan2(v, u) for (u, v, _) in outer)
    if len(angles) < 3:
        raise PreconditionError("outer region is unbounded")
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    if max(gaps) >= math.pi - 1e-12:
        raise PreconditionError("outer region is unbounded")

    candidates: list[Point] = []
    H = len(outer)
    for i in range(H):
        u1, v1, w1 = outer[i]
        for j in range(i + 1, H):
            u2, v2, w2 = outer[j]
            det = u1 * v2 - u2 * v1
            if abs(det) <= 1e-14:
                continue
            x = (-w1 * v2 + w2 * v1) / det
            y = (-u1 * w2 + u2 * w1) / det
            if all(u * x + v * y + w >= -GEOM_SLACK for (u, v, w) in outer):
                candidates.append((x, y))
    if len(candidates) < 3:
        raise PreconditionError("outer region is degenerate")
    scale = max(max(abs(x), abs(y)) for x, y in candidates)
    uniq, _ = _dedupe_points(candidates, tol=1e-11 * max(1.0, scale))
    hull = convex_hull(uniq)
    if len(hull) < 3 or _polygon_area2(hull) <= 0:
        raise PreconditionError("outer region has empty interior")
    return hull


# ---------------------------------------------------------------------------
# greedy supporting chains


class _Sweep:
    """Feasibility sweep state for one instance."""

    def __init__(self, inst: NestedPolygonInstance):
        self.inst = inst
        self.hull = convex_hull(inst.inner)
        if len(self.hull) < 3 or _polygon_area2(self.hull) <= 1e-24:
            raise PreconditionError("inner points are collinear; the matrix has rank < 3 upstream")
        self.Q = halfplane_polygon(inst.outer)
        xs = [p[0] for p in self.Q]
        ys = [p[1] for p in self.Q]
        self.diam = max(max(xs) - min(xs), max(ys) - min(ys))
        self.eps_dir = 1e-12 * max(1.0, self.diam) ** 2
        # perimeter parametrization of the outer boundary
        self.edge_len = [
            math.dist(a, b) for a, b in zip(self.Q, self.Q[1:] + self.Q[:1])
        ]
        self.perimeter = sum(self.edge_len)

    def point_at(self, s: float) -> Point:
        s = s % self.perimeter
        for (a, b), el in zip(zip(self.Q, self.Q[1:] + self.Q[:1]), self.edge_len):
            if el == 0.0:
                continue
            if s <= el:
                t = s / el
                return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            s -= el
        return self.Q[0]

    def tangent_dir(self, z: Point) -> Point | None:
        """Direction of the maximal supporting edge from z (inner hull on its left)."""
        best = None
        best_d2 = -1.0
        near2 = (1e-13 * max(1.0, self.diam)) ** 2
        for v in self.hull:
            dx, dy = v[0] - z[0], v[1] - z[1]
            d2 = dx * dx + dy * dy
            if d2 <= near2:
                continue
            ok = True
            for p in self.hull:
                if dx * (p[1] - z[1]) - dy * (p[0] - z[0]) < -self.eps_dir:
                    ok = False
                    break
            if ok and d2 > best_d2:
                best = (dx, dy)
                best_d2 = d2
        if best is None:
            return None
        norm = math.hypot(*best)
        return (best[0] / norm, best[1] / norm)

    def ray_exit(self, z: Point, d: Point) -> Point:
        tmax = math.inf
        for (u, v, w) in self.inst.outer:
            den = u * d[0] + v * d[1]
            if den < -1e-15:
                val = u * z[0] + v * z[1] + w
                t = max(val, 0.0) / (-den)
                if t < tmax:
                    tmax = t
        if not math.isfinite(tmax):
            raise PreconditionError("outer region is unbounded along a chain ray")
        return (z[0] + tmax * d[0], z[1] + tmax * d[1])

    def chain(self, z0: Point, k: int) -> list[Point] | None:
        pts = [z0]
        for _ in range(k - 1):
            d = self.tangent_dir(pts[-1])
            if d is None:
                return None
            pts.append(self.ray_exit(pts[-1], d))
        return pts

    def polygon_margin(self, pts: list[Point] | None) -> float:
        """Min containment margin; >= -GEOM_SLACK certifies a nested polygon."""
        if pts is None:
            return -math.inf
        if _polygon_area2(pts) <= 0:
            return -math.inf
        margin = math.inf
        for a, b in zip(pts, pts[1:] + pts[:1]):
            el = math.dist(a, b)
            if el <= 1e-15 * max(1.0, self.diam):
                continue
            for p in self.inst.inner:
                c = _cross(a, b, p) / el
                if c < margin:
                    margin = c
        for (x, y) in pts:
            for (u, v, w) in self.inst.outer:
                r = u * x + v * y + w
                if r < margin:
                    margin = r
        return margin

    def special_starts(self) -> list[Point]:
        """Contact points and outer vertices: mandatory exact starting positions."""
        starts = [self.inst.inner[i] for i in self.inst.contacts]
        starts.extend(self.Q)
        uniq, _ = _dedupe_points(starts, tol=1e-13 * max(1.0, self.diam))
        return uniq

    def try_polygon(self, pts: list[Point] | None) -> tuple[float, list[Point] | None]:
        """Convex-hull a candidate chain and report its containment margin."""
        if pts is None:
            return -math.inf, None
        h = convex_hull(pts)
        if len(h) < 3:
            return -math.inf, None
        return self.polygon_margin(h), h


def _exact_margin_ok(pts: list[Point], inst: NestedPolygonInstance) -> bool:
    """Rational re-verification of a float polygon against an exact instance."""
    if inst.inner_exact is None:
        return True
    P = [(Fraction(x), Fraction(y)) for (x, y) in pts]
    slack2 = _EXACT_SLACK * _EXACT_SLACK
    for a, b in zip(P, P[1:] + P[:1]):
        ex, ey = b[0] - a[0], b[1] - a[1]
        e2 = ex * ex + ey * ey
        if e2 == 0:
            continue
        for (px, py) in inst.inner_exact:
            c = ex * (py - a[1]) - ey * (px - a[0])
            if c < 0 and c * c > slack2 * e2:
                return False
    for (x, y) in P:
        for (u, v, w) in inst.outer_exact:
            r = u * x + v * y + w
            if r < 0 and r * r > slack2 * (u * u + v * v):
                return False
    return True


def min_nested_polygon(inst: NestedPolygonInstance) -> PolygonWitness:
    """Minimum-vertex convex polygon between conv(inner) and the outer region.

    Scans k upward; each candidate k is tried from contact points, outer
    vertices, and a uniform boundary sweep with local golden-section
    refinement.  conv(inner) and the outer boundary polygon are themselves
    valid nested polygons, which caps the scan and guarantees termination
    with a certified witness.
    """
    sweep = _Sweep(inst)
    for i, (x, y) in enumerate(inst.inner):
        if any(u * x + v * y + w < -GEOM_SLACK for (u, v, w) in inst.outer):
            raise PreconditionError(f"inner point {i} lies outside the outer region")

    hull, Q = sweep.hull, sweep.Q
    specials = sweep.special_starts()
    k_cap = min(len(hull), len(Q))

    def certified(pts: list[Point] | None) -> PolygonWitness | None:
        margin, h = sweep.try_polygon(pts)
        if h is not None and margin >= -GEOM_SLACK and _exact_margin_ok(h, inst):
            return PolygonWitness(tuple(h))
        return None

    for k in range(3, k_cap + 1):
        if len(hull) == k:
            got = certified(hull)
            if got:
                return got
        if len(Q) == k:
            got = certified(Q)
            if got:
                return got
        for z0 in specials:
            got = certified(sweep.chain(z0, k))
            if got:
                return got
        uniform_margins = []
        for i in range(SWEEP_STARTS):
            pts = sweep.chain(sweep.point_at(sweep.perimeter * i / SWEEP_STARTS), k)
            got = certified(pts)
            if got:
                return got
            uniform_margins.append(sweep.try_polygon(pts)[0])
        got = _refine(sweep, inst, k, uniform_margins, certified)
        if got:
            return got
    raise PreconditionError("no nested polygon found up to the structural cap; instance is degenerate")


def _refine(sweep: _Sweep, inst: NestedPolygonInstance, k: int, uniform: list[float], certified):
    """Golden-section margin maximization around local maxima of the uniform sweep."""
    n = len(uniform)
    if n < 3:
        return None
    per = sweep.perimeter
    step = per / SWEEP_STARTS

    def margin_at(s: float) -> float:
        return sweep.try_polygon(sweep.chain(sweep.point_at(s), k))[0]

    local = [
        i for i in range(n) if uniform[i] >= uniform[(i - 1) % n] and uniform[i] >= uniform[(i + 1) % n]
    ]
    local.sort(key=lambda i: -uniform[i])
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    for i in local[:16]:
        a, b = (i - 1) * step, (i + 1) * step
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        fc, fd = margin_at(c), margin_at(d)
        while (b - a) > REFINE_WIDTH * max(1.0, per):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - phi * (b - a)
                fc = margin_at(c)
            else:
                a, c, fc = c, d, fd
                d = a + phi * (b - a)
                fd = margin_at(d)
        got = certified(sweep.chain(sweep.point_at((a + b) / 2.0), k))
        if got:
            return got
    return None


# ---------------------------------------------------------------------------
# matrix-level entry point


RECONCILE_RESTARTS = 64
RECONCILE_ITERS = 5000


def nnrank_rank3(
    T: Matrix,
    rel_tol: float = 1e-8,
    reconcile: bool = True,
    seed: int = 0,
    restarts: int = RECONCILE_RESTARTS,
    iters: int = RECONCILE_ITERS,
) -> Rank3Result:
    """Nonnegative rank and verified witness for a rank-3 nonnegative matrix.

    The planar nested-polygon minimum k_res is computed first with its
    certified witness.  Polygon infeasibility below k_res certifies the true
    nonnegative rank only down to 4, so for k_res >= 5 a seeded verified
    least-squares search probes smaller inner dimensions; any verified find
    lowers k (the scan walks downward and stops at the first failure).
    """
    if not T.is_nonnegative():
        raise PreconditionError("matrix must be entrywise nonnegative")
    rank = rank_exact(T) if isinstance(T, ExactMatrix) else rank_float(T, rel_tol)
    if rank < 3:
        raise PreconditionError(f"rank is {rank} < 3; use factor_rank_le2 (method exact2) instead")
    if rank > 3:
        raise PreconditionError(f"rank is {rank} > 3; exact certification stops at rank 3 (use bounds or nmf)")

    inst = projective_slice(T)
    polygon = min_nested_polygon(inst)
    k_res = polygon.k

    if k_res == min(T.rows, T.cols):
        witness = trivial_witness(T)
    else:
        witness = _lift_witness(T, inst, polygon)
    if not verify(T, witness, GEOM_SLACK):
        raise PreconditionError("internal: lifted witness failed verification at module tolerance")

    k, method = k_res, "polygon"
    if reconcile and k_res >= 5:
        from .nmf import search_upper

        probe = k_res - 1
        while probe >= 4:
            res = search_upper(T, probe, restarts=restarts, seed=seed, fit_tol=GEOM_SLACK, iters=iters)
            if not res.found:
                break
            k, witness, method = probe, res.witness, "polygon+nmf"
            probe -= 1
    return Rank3Result(k=k, witness=witness, polygon=polygon, instance=inst, k_restricted=k_res, method=method)


def _lift_witness(T: Matrix, inst: NestedPolygonInstance, polygon: PolygonWitness) -> NonnegFactorization:
    m, n = inst.shape
    k = polygon.k
    verts = list(polygon.vertices)

    L = np.zeros((m, k))
    for l, (x, y) in enumerate(verts):
        col = inst.basis @ np.array([x, y, 1.0 - x - y])
        if col.min() < -GEOM_SLACK:
            raise PreconditionError("internal: polygon vertex lifts outside the nonnegative orthant")
        L[inst.kept_rows, l] = np.maximum(col, 0.0)

    R = np.zeros((k, n))
    for j in range(n):
        coords = inst.col_coords[j]
        if coords is None:
            continue
        bary = _barycentric_in_polygon(coords, verts)
        R[:, j] = np.maximum(bary, 0.0) * inst.col_sums[j]
    return NonnegFactorization(FloatMatrix(L), FloatMatrix(R), clamp_tol=GEOM_SLACK)


def _barycentric_in_polygon(p: Point, verts: list[Point]) -> np.ndarray:
    """Convex coefficients of p over the polygon vertices via its fan triangles."""
    k = len(verts)
    best = None
    best_score = -math.inf
    x0, y0 = verts[0]
    for i in range(1, k - 1):
        x1, y1 = verts[i]
        x2, y2 = verts[i + 1]
        det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        if abs(det) <= 1e-18:
            continue
        s = ((p[0] - x0) * (y2 - y0) - (p[1] - y0) * (x2 - x0)) / det
        t = ((x1 - x0) * (p[1] - y0) - (y1 - y0) * (p[0] - x0)) / det
        bary = np.zeros(k)
        bary[0] = 1.0 - s - t
        bary[i] = s
        bary[i + 1] = t
        score = min(1.0 - s - t, s, t)
        if score > best_score:
            best_score = score
            best = bary
    if best is None or best_score < -GEOM_SLACK:
        raise PreconditionError("internal: inner point is not covered by the witness polygon")
    return best
