import math
from fractions import Fraction

import numpy as np
import pytest

from conerank import (
    DimensionError,
    ExactMatrix,
    FloatMatrix,
    GridSpec,
    PreconditionError,
    circulant,
    rank_exact,
    rank_float,
    sample_kernel,
    scale_and_permute,
)
from conerank.matcore import hstack, vstack

from conftest import random_nonneg_exact, seeded_rng
from oracles import circulant_rank_eigen, trig_gram_eigenvalues


class TestRankExact:
    def test_robbins_has_rank_three(self, robbins):
        assert rank_exact(robbins) == 3

    def test_zero_matrix(self):
        assert rank_exact(ExactMatrix.zeros(4, 4)) == 0

    def test_circulant_2101_against_eigenvalue_oracle(self):
        C = circulant([2, 1, 0, 1])
        assert circulant_rank_eigen([2, 1, 0, 1]) == 3
        assert rank_exact(C) == 3

    def test_identity(self):
        assert rank_exact(ExactMatrix.identity(5)) == 5

    def test_transpose_invariance(self):
        rng = seeded_rng(42)
        for _ in range(25):
            m, n = rng.randint(1, 6), rng.randint(1, 6)
            M = random_nonneg_exact(rng, m, n)
            assert rank_exact(M) == rank_exact(M.transpose())

    def test_rational_entries(self):
        M = ExactMatrix.from_rows([[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 6), Fraction(1, 3)]])
        assert rank_exact(M) == 1


class TestRankFloat:
    def test_identity(self):
        assert rank_float(FloatMatrix.identity(3), 1e-8) == 3

    def test_circulant_float_matches_exact(self):
        C = circulant([2, 1, 0, 1])
        assert rank_float(C.to_float(), 1e-8) == rank_exact(C) == 3

    def test_kernel_64_is_rank_three(self):
        # columns are samples of 1, cos, sin whose Gram is diag(n, n/2, n/2)
        n = 64
        g = GridSpec(n)
        K = sample_kernel(g, g)
        t = g.points()
        F = np.vstack([np.ones(n), np.cos(t), np.sin(t)])
        G = F @ F.T
        lam_expected = trig_gram_eigenvalues(n)
        assert np.allclose(sorted(np.linalg.eigvalsh(G)), sorted(lam_expected), atol=1e-9)
        assert np.abs(K.data - F.T @ F).max() < 1e-12
        assert rank_float(K, 1e-8) == 3

    def test_zero(self):
        assert rank_float(FloatMatrix.zeros(3, 5), 1e-8) == 0

    def test_rel_tol_validation(self):
        with pytest.raises(PreconditionError):
            rank_float(FloatMatrix.identity(2), 0.0)


class TestSampleKernel:
    def test_n4_is_circulant_2101(self):
        g = GridSpec(4)
        K = sample_kernel(g, g)
        C = circulant([2, 1, 0, 1]).to_float()
        assert np.abs(K.data - C.data).max() < 1e-12

    def test_n2(self):
        g = GridSpec(2)
        K = sample_kernel(g, g)
        assert np.abs(K.data - np.array([[2.0, 0.0], [0.0, 2.0]])).max() < 1e-12

    def test_n3_half_entries(self):
        g = GridSpec(3)
        K = sample_kernel(g, g)
        C = circulant([2, Fraction(1, 2), Fraction(1, 2)]).to_float()
        assert np.abs(K.data - C.data).max() < 1e-12

    def test_entries_in_range_and_symmetry(self):
        for n, offset in [(5, 0.0), (9, 0.3), (16, 0.1)]:
            g = GridSpec(n, offset)
            K = sample_kernel(g, g)
            assert K.data.min() >= 0.0 and K.data.max() <= 2.0
            assert np.abs(K.data - K.data.T).max() < 1e-12

    def test_rectangular(self):
        K = sample_kernel(GridSpec(3), GridSpec(5))
        assert K.shape == (3, 5)

    def test_aligned_subgrid_is_submatrix(self):
        n = 4
        gn, g2n = GridSpec(n), GridSpec(2 * n)
        Kn = sample_kernel(gn, gn).data
        K2n = sample_kernel(g2n, g2n).data
        sel = [2 * i for i in range(n)]  # offset 0: the n-grid is every other 2n-point
        assert np.abs(K2n[np.ix_(sel, sel)] - Kn).max() < 1e-12

    def test_kernel_rank_three_for_all_small_grids(self):
        for n in range(3, 12):
            g = GridSpec(n, 0.1 if n % 2 else 0.0)
            assert rank_float(sample_kernel(g, g), 1e-8) == 3


class TestGridSpec:
    def test_points_spacing(self):
        g = GridSpec(8, 0.1)
        t = g.points()
        assert np.allclose(np.diff(t), 2 * math.pi / 8)
        assert t[0] == 0.1
        assert g.weight == pytest.approx(2 * math.pi / 8)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            GridSpec(0)
        with pytest.raises(PreconditionError):
            GridSpec(4, 2 * math.pi / 4)  # offset must stay below one spacing
        with pytest.raises(PreconditionError):
            GridSpec(4, -0.1)


class TestScaleAndPermute:
    def test_identity_transforms(self, robbins):
        assert scale_and_permute(robbins) == robbins

    def test_double_first_row(self, robbins):
        out = scale_and_permute(robbins, d_left=[2, 1, 1, 1])
        assert out.row(0) == tuple(2 * x for x in robbins.row(0))
        assert out.row(1) == robbins.row(1)

    def test_cyclic_shift_preserves_rank(self):
        C = circulant([2, 1, 0, 1])
        shifted = scale_and_permute(C, p_left=[1, 2, 3, 0])
        assert shifted.row(0) == C.row(1)
        assert rank_exact(shifted) == rank_exact(C) == 3

    def test_rank_invariance_random(self):
        rng = seeded_rng(7)
        for _ in range(20):
            m, n = rng.randint(2, 5), rng.randint(2, 5)
            M = random_nonneg_exact(rng, m, n)
            dl = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(m)]
            dr = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(n)]
            pl = list(range(m))
            pr = list(range(n))
            rng.shuffle(pl)
            rng.shuffle(pr)
            out = scale_and_permute(M, dl, dr, pl, pr)
            assert out.is_nonnegative()
            assert rank_exact(out) == rank_exact(M)

    def test_nonpositive_diagonal_rejected(self, robbins):
        with pytest.raises(PreconditionError):
            scale_and_permute(robbins, d_left=[0, 1, 1, 1])
        with pytest.raises(PreconditionError):
            scale_and_permute(robbins, d_right=[-1, 1, 1, 1])

    def test_bad_permutation_rejected(self, robbins):
        with pytest.raises(PreconditionError):
            scale_and_permute(robbins, p_left=[0, 0, 1, 2])

    def test_float_kind(self):
        M = FloatMatrix.from_rows([[1.0, 2.0], [3.0, 4.0]])
        out = scale_and_permute(M, d_left=[2.0, 1.0], p_right=[1, 0])
        assert np.allclose(out.data, [[4.0, 2.0], [4.0, 3.0]])


class TestMatrixTypes:
    def test_entry_count_mismatch(self):
        with pytest.raises(DimensionError):
            ExactMatrix(2, 2, [1, 2, 3])

    def test_nonneg_flag_tracks_entries(self):
        rng = seeded_rng(3)
        for _ in range(20):
            entries = [rng.randint(-3, 6) for _ in range(6)]
            M = ExactMatrix(2, 3, entries)
            assert M.is_nonnegative() == all(e >= 0 for e in entries)

    def test_float_rejects_nonfinite(self):
        with pytest.raises(PreconditionError):
            FloatMatrix([[1.0, float("nan")]])
        with pytest.raises(PreconditionError):
            FloatMatrix([[float("inf")]])

    def test_matmul_and_transpose(self):
        A = ExactMatrix.from_rows([[1, 2], [3, 4]])
        B = ExactMatrix.from_rows([[0, 1], [1, 0]])
        assert (A @ B).row_lists() == [[2, 1], [4, 3]]
        assert A.transpose().row_lists() == [[1, 3], [2, 4]]

    def test_empty_dimensions_allowed(self):
        E = ExactMatrix.zeros(3, 0)
        F = ExactMatrix.zeros(0, 2)
        assert (E @ F).row_lists() == [[0, 0], [0, 0], [0, 0]]

    def test_stacking(self):
        A = ExactMatrix.from_rows([[1], [2]])
        B = ExactMatrix.from_rows([[3], [4]])
        assert hstack(A, B).row_lists() == [[1, 3], [2, 4]]
        assert vstack(A, B).row_lists() == [[1], [2], [3], [4]]

    def test_exact_float_round_trip(self):
        M = ExactMatrix.from_rows([[Fraction(1, 2), 3]])
        assert M.to_float().to_exact() == M
