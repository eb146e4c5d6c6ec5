"""Independent oracles used by the tests.

Each oracle recomputes an expected value along a path disjoint from the
implementation it checks: circulant ranks via eigenvalue evaluation, cone
margins via brute-force grid minimization, and nested-triangle feasibility
via an exhaustive support-angle grid.
"""

import cmath
import math

import numpy as np


def circulant_rank_eigen(first_row, tol=1e-9):
    """Rank of a circulant matrix: count nonzero values of f at the n-th roots of unity."""
    n = len(first_row)
    rank = 0
    for k in range(n):
        w = cmath.exp(2j * math.pi * k / n)
        val = sum(c * w**j for j, c in enumerate(first_row))
        if abs(val) > tol:
            rank += 1
    return rank


def grid_min_degree1(a, b, c, m=4096):
    """Brute-force minimum of a*cos(s) + b*sin(s) + c over an m-point grid."""
    s = 2.0 * math.pi * np.arange(m) / m
    return float((a * np.cos(s) + b * np.sin(s) + c).min())


def trig_gram_eigenvalues(n):
    """Exact Gram eigenvalues of the sampled (1, cos, sin) basis on an n-grid.

    For n >= 3 the sampled basis vectors are orthogonal with squared norms
    (n, n/2, n/2), which certifies that the sampled kernel has rank 3.
    """
    return (float(n), n / 2.0, n / 2.0)


def triangle_feasibility_margin(inner_pts, halfplanes, n_angles=360):
    """Max over support-line triangles of the min corner margin inside the outer region.

    A nested triangle exists iff one exists whose three edges all support the
    inner hull; such triangles are parametrized by three support angles.  The
    oracle grids the angles, intersects the support lines, and reports the
    best (most feasible) min margin of the corners against the outer
    half-planes.  A strictly negative value on a fine grid is infeasibility
    evidence with a quantified violation; a nonnegative value is a witness.
    """
    P = np.asarray(inner_pts, dtype=float)
    H = np.asarray(halfplanes, dtype=float)  # rows (u, v, w), normalized
    phis = 2.0 * math.pi * np.arange(n_angles) / n_angles
    nx, ny = np.cos(phis), np.sin(phis)
    # support offsets: h(phi) = max_p <p, n(phi)>; support line is <x, n> = h
    h = (P @ np.vstack([nx, ny])).max(axis=0)

    # corner(i, j) = intersection of support lines i and j
    det = nx[:, None] * ny[None, :] - nx[None, :] * ny[:, None]
    ok = np.abs(det) > 1e-9
    with np.errstate(divide="ignore", invalid="ignore"):
        cx = np.where(ok, (h[:, None] * ny[None, :] - h[None, :] * ny[:, None]) / det, 0.0)
        cy = np.where(ok, (nx[:, None] * h[None, :] - nx[None, :] * h[:, None]) / det, 0.0)
    # margin of each corner against the outer region (min over half-planes)
    M = np.full((n_angles, n_angles), -np.inf)
    vals = np.full((n_angles, n_angles), np.inf)
    for (u, v, w) in H:
        r = u * cx + v * cy + w
        np.minimum(vals, r, out=vals)
    M[ok] = vals[ok]

    best = -math.inf
    gap_limit = math.pi - 1e-9
    jj, ll = np.meshgrid(phis, phis, indexing="ij")
    order_ok = ll > jj
    g2_ok = (ll - jj) < gap_limit
    for i in range(n_angles):
        # triples (i, j, l) with i < j < l; bounded iff all circular gaps < pi
        Mi = M[i]
        cand = np.minimum(np.minimum(Mi[:, None], Mi[None, :]), M)
        span_ok = (
            (jj > phis[i])
            & order_ok
            & ((jj - phis[i]) < gap_limit)
            & g2_ok
            & ((2.0 * math.pi - (ll - phis[i])) < gap_limit)
        )
        if np.any(span_ok):
            m = cand[span_ok].max()
            if m > best:
                best = m
    return best
