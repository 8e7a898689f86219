import numpy as np
import pytest

from specblock import (
    ArgumentError,
    BlockOperatorMatrix,
    LandmarkError,
    RelativeBound,
    SingularShiftError,
    assemble,
    best_relative_bound,
    eigenvalue_window,
    hermitian_eig,
    landmarks,
    minimal_b_for_a,
    relative_bound_margin,
    resolvent_block,
    schur_complement,
    spectral_distance,
)
from specblock.selftest import random_block

from oracles import cubic_fixture_roots, herm2x2_eigs

M3_FULL = np.array([[2.0, 0.0, 1.0], [0.0, 10.0, 1.0], [1.0, 1.0, -1.0]])


class TestBlockOperatorMatrix:
    def test_dimension_mismatch(self):
        with pytest.raises(ArgumentError):
            BlockOperatorMatrix(A=np.eye(2), B=np.ones((3, 1)), C=np.eye(1))

    def test_non_hermitian_diagonal_block(self):
        with pytest.raises(ArgumentError):
            BlockOperatorMatrix(A=[[0.0, 1.0], [0.0, 0.0]], B=np.ones((2, 1)),
                                C=np.eye(1))


class TestAssemble:
    def test_cubic_fixture_block_placement(self, m3):
        assert np.array_equal(assemble(m3).real, M3_FULL)
        assert np.max(np.abs(assemble(m3).imag)) == 0.0

    def test_decoupled_spectrum_is_union(self, rng):
        a = np.diag(rng.uniform(-5, 5, 4))
        c = np.diag(rng.uniform(-5, 5, 3))
        block = BlockOperatorMatrix(A=a, B=np.zeros((4, 3)), C=c)
        expected = np.sort(np.concatenate([np.diag(a), np.diag(c)]))
        got = hermitian_eig(assemble(block)).eigenvalues
        assert np.allclose(got, expected, atol=1e-12)

    def test_one_by_one_closed_form(self):
        block = BlockOperatorMatrix(A=[[2.0]], B=[[1.0]], C=[[0.0]])
        lo, hi = herm2x2_eigs(2.0, 1.0, 0.0)
        got = hermitian_eig(assemble(block)).eigenvalues
        assert got[0] == pytest.approx(1.0 - np.sqrt(2.0), abs=1e-12)
        assert got[1] == pytest.approx(1.0 + np.sqrt(2.0), abs=1e-12)
        assert np.allclose(got, [lo, hi], atol=1e-12)


class TestSchurComplement:
    def test_direct_arithmetic(self, m3):
        lam = 0.645
        # S = diag(2 - lam, 10 - lam) + [[1, 1], [1, 1]] / (1 + lam)
        w = 1.0 / (1.0 + lam)
        expected = np.array([[2.0 - lam + w, w], [w, 10.0 - lam + w]])
        assert np.allclose(schur_complement(m3, lam), expected, atol=1e-12)

    def test_decoupled_is_shifted_a(self, rng):
        a = np.diag([1.0, 4.0])
        block = BlockOperatorMatrix(A=a, B=np.zeros((2, 2)), C=np.diag([7.0, 8.0]))
        lam = 2.5
        assert np.allclose(schur_complement(block, lam), a - lam * np.eye(2),
                           atol=1e-14)

    def test_zero_eigenvalue_detects_spectrum(self, m3):
        lam1 = cubic_fixture_roots()[1]
        s_eigs = hermitian_eig(schur_complement(m3, lam1)).eigenvalues
        assert np.min(np.abs(s_eigs)) <= 1e-6

    def test_singular_shift_rejected(self, m3):
        with pytest.raises(SingularShiftError):
            schur_complement(m3, -1.0)


class TestResolventBlock:
    def test_decoupled_block_diagonal(self):
        a = np.diag([1.0, 4.0])
        c = np.diag([9.0])
        block = BlockOperatorMatrix(A=a, B=np.zeros((2, 1)), C=c)
        alpha = 2.0
        res = resolvent_block(block, alpha)
        expected = np.diag([1.0 / (1.0 - alpha), 1.0 / (4.0 - alpha),
                            1.0 / (9.0 - alpha)])
        assert np.allclose(res, expected, atol=1e-12)

    def test_matches_direct_inverse(self, m3):
        res = resolvent_block(m3, 6.0)
        direct = np.linalg.inv(M3_FULL - 6.0 * np.eye(3))
        assert np.allclose(res, direct, atol=1e-8 * np.linalg.norm(direct, 2))

    def test_one_by_one_exact(self):
        block = BlockOperatorMatrix(A=[[2.0]], B=[[1.0]], C=[[0.0]])
        res = resolvent_block(block, -1.0)
        assert np.allclose(res, [[0.5, -0.5], [-0.5, 1.5]], atol=1e-12)

    def test_shift_on_spectrum_rejected(self, m3):
        lam = hermitian_eig(M3_FULL).eigenvalues[1]
        with pytest.raises(SingularShiftError):
            resolvent_block(m3, float(lam))

    def test_random_instances_match_inverse(self, rng):
        for _ in range(25):
            block = random_block(rng)
            full = assemble(block)
            spec_m = hermitian_eig(full).eigenvalues
            spec_c = hermitian_eig(block.C).eigenvalues
            alpha = float(spec_m[-1]) + 1.0
            if min(spectral_distance(alpha, spec_m),
                   spectral_distance(alpha, spec_c)) < 1e-6:
                continue
            res = resolvent_block(block, alpha)
            direct = np.linalg.inv(full - alpha * np.eye(full.shape[0]))
            rel = np.linalg.norm(res - direct, 2) / np.linalg.norm(direct, 2)
            assert rel <= 1e-8


class TestRelativeBound:
    def test_negative_constants_rejected(self):
        with pytest.raises(ArgumentError):
            RelativeBound(-0.1, 0.0)

    def test_minimal_b_at_zero(self, m3):
        # BB* = [[1, 1], [1, 1]] has top eigenvalue 2
        assert minimal_b_for_a(m3, 0.0).b == pytest.approx(2.0, abs=1e-12)

    def test_decoupled_needs_nothing(self):
        block = BlockOperatorMatrix(A=np.diag([1.0, 2.0]), B=np.zeros((2, 1)),
                                    C=[[0.0]])
        for a in (0.0, 0.7, 3.0):
            assert minimal_b_for_a(block, a).b == 0.0

    def test_a_one_already_dominates(self, m3):
        # lambda_max of [[-1, 1], [1, -9]] is -5 + sqrt(17) < 0
        lo, hi = herm2x2_eigs(-1.0, 1.0, -9.0)
        assert hi == pytest.approx(-5.0 + np.sqrt(17.0), abs=1e-12)
        assert hi < 0
        assert minimal_b_for_a(m3, 1.0).b == 0.0

    def test_negative_a_rejected(self, m3):
        with pytest.raises(ArgumentError):
            minimal_b_for_a(m3, -1.0)

    def test_margin_and_tightness(self, rng):
        for _ in range(30):
            block = random_block(rng)
            rb = minimal_b_for_a(block, float(rng.uniform(0.0, 2.0)))
            margin, witness = relative_bound_margin(block, rb)
            assert margin >= -1e-9
            if rb.b > 0.0:
                assert abs(margin) <= 1e-6
                # the witness achieves near equality in the quadratic form
                lhs = np.linalg.norm(block.B.conj().T @ witness) ** 2
                rhs = (rb.a * np.real(witness.conj() @ (block.A @ witness))
                       + rb.b)
                assert lhs == pytest.approx(rhs, abs=1e-6 * max(1.0, abs(rhs)))

    def test_best_scan_beats_or_ties_zero(self, m3):
        rb = best_relative_bound(m3)
        margin, _ = relative_bound_margin(m3, rb)
        assert margin >= -1e-9
        mu = 2.0
        c = -1.0
        width = eigenvalue_window(mu, c, rb).width
        width0 = eigenvalue_window(mu, c, minimal_b_for_a(m3, 0.0)).width
        assert width <= width0 + 1e-12

    def test_best_scan_decoupled(self):
        block = BlockOperatorMatrix(A=np.diag([1.0, 2.0]), B=np.zeros((2, 1)),
                                    C=[[0.0]])
        rb = best_relative_bound(block)
        assert rb.a == 0.0 and rb.b == 0.0


class TestLandmarks:
    def test_cubic_fixture(self, m3):
        marks = landmarks(m3)
        roots = cubic_fixture_roots()
        assert marks.c == pytest.approx(-1.0, abs=1e-12)
        assert marks.c_tilde == pytest.approx(0.5 * (-1.0 + roots[1]), abs=1e-9)
        assert marks.kappa == 0
        assert np.allclose(marks.lambda_above_c, roots[1:], atol=1e-9)

    def test_decoupled(self):
        block = BlockOperatorMatrix(A=[[5.0]], B=[[0.0]], C=[[1.0]])
        marks = landmarks(block)
        assert marks.c == 1.0
        assert marks.c_tilde == pytest.approx(3.0, abs=1e-12)
        assert marks.kappa == 0

    def test_depressed_channel_kappa_confirmed_by_schur_oracle(self):
        # kappa here comes out 0: the Schur complement at c~ is positive in
        # both channels, confirmed by direct 2x2 arithmetic.
        block = BlockOperatorMatrix(A=np.diag([0.5, 20.0]), B=[[2.0], [0.0]],
                                    C=[[-2.0]])
        marks = landmarks(block)
        ct = marks.c_tilde
        s_diag = (0.5 - ct - 4.0 / (-2.0 - ct), 20.0 - ct)
        oracle_kappa = sum(1 for v in s_diag if v < 0.0)
        assert oracle_kappa == 0
        assert marks.kappa == oracle_kappa

    def test_gap_above_c_is_clean(self, rng):
        # (c, c_tilde] never contains assembled spectrum
        for _ in range(40):
            block = random_block(rng)
            try:
                marks = landmarks(block)
            except LandmarkError:
                continue
            spec_m = hermitian_eig(assemble(block)).eigenvalues
            inside = (spec_m > marks.c + 1e-9) & (spec_m <= marks.c_tilde)
            assert not np.any(inside)

    def test_no_spectrum_above_c(self):
        block = BlockOperatorMatrix(A=[[-5.0]], B=[[0.0]], C=[[1.0]])
        with pytest.raises(LandmarkError):
            landmarks(block)


def test_schur_spectrum_equivalence(rng):
    # both directions of the zero-eigenvalue criterion on random instances
    for _ in range(60):
        block = random_block(rng)
        full = assemble(block)
        spec_m = hermitian_eig(full).eigenvalues
        spec_c = hermitian_eig(block.C).eigenvalues
        for lam in spec_m:
            if spectral_distance(float(lam), spec_c) <= 1e-6:
                continue
            s_eigs = hermitian_eig(schur_complement(block, float(lam))).eigenvalues
            assert np.min(np.abs(s_eigs)) <= 1e-6
        scan = np.linspace(float(spec_m[0]) - 1.0, float(spec_m[-1]) + 1.0, 11)
        for lam in np.concatenate([spec_m, scan]):
            if spectral_distance(float(lam), spec_c) <= 1e-6:
                continue
            s_eigs = hermitian_eig(schur_complement(block, float(lam))).eigenvalues
            if np.min(np.abs(s_eigs)) <= 1e-9:
                assert spectral_distance(float(lam), spec_m) <= 1e-6
