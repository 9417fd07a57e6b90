import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import luequiv as lq
from luequiv.errors import (
    DimensionMismatch,
    NotHermitian,
    NotPositiveSemidefinite,
    NotUnitary,
    NotUnitTrace,
)
from luequiv.states import (
    coeff_to_vector,
    decomposition_from_coeffs,
    density_from_decomposition,
    remix_block,
    transform_decomposition,
    vector_to_coeff,
)

from conftest import bell_density, orbit_pair, unit


class TestValidateDensity:
    def test_maximally_mixed(self):
        rho = lq.validate_density(np.eye(4, dtype=complex) / 4, 2)
        assert rho.dim_local == 2

    def test_rank_two_diagonal(self):
        lq.validate_density(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), 2)

    def test_trace_two_rejected(self):
        with pytest.raises(NotUnitTrace):
            lq.validate_density(np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex), 2)

    def test_non_hermitian_rejected(self):
        m = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        m[0, 1] = 0.3
        with pytest.raises(NotHermitian):
            lq.validate_density(m, 2)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(NotPositiveSemidefinite):
            lq.validate_density(np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex), 2)

    def test_size_mismatch_rejected(self):
        with pytest.raises(DimensionMismatch):
            lq.validate_density(np.eye(4, dtype=complex) / 4, 3)

    def test_never_repairs(self):
        m = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        rho = lq.validate_density(m, 2)
        m[0, 0] = 99.0  # caller-side mutation must not leak in
        assert rho.matrix[0, 0] == 0.5
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0


class TestSpectralDecompose:
    def test_bell_state(self):
        sd = lq.spectral_decompose(bell_density())
        assert sd.rank == 1
        np.testing.assert_allclose(sd.eigenvalues, [1.0], atol=1e-12)
        a = sd.coeff_matrices[0]
        np.testing.assert_allclose(np.abs(a), np.eye(2) / np.sqrt(2), atol=1e-12)

    def test_degenerate_diagonal(self):
        rho = lq.validate_density(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), 2)
        sd = lq.spectral_decompose(rho)
        assert sd.rank == 2
        np.testing.assert_allclose(sd.eigenvalues, [0.5, 0.5])
        assert sd.blocks == ((0, 1),)
        for a in sd.coeff_matrices:
            # eigenvectors live in span{|11>, |12>}: second row vanishes
            np.testing.assert_allclose(a[1, :], 0, atol=1e-12)
            assert abs(np.linalg.norm(a) - 1.0) < 1e-12

    def test_nondegenerate_diagonal(self):
        rho = lq.validate_density(np.diag([0.75, 0.0, 0.0, 0.25]).astype(complex), 2)
        sd = lq.spectral_decompose(rho)
        np.testing.assert_allclose(sd.eigenvalues, [0.75, 0.25])
        assert sd.blocks == ((0,), (1,))
        np.testing.assert_allclose(np.abs(sd.coeff_matrices[0]), unit(0, 0), atol=1e-12)
        np.testing.assert_allclose(np.abs(sd.coeff_matrices[1]), unit(1, 1), atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_reconstruction(self, n):
        for seed in range(10):
            rho = lq.random_density(n, 1 + seed % (n * n), seed=seed)
            sd = lq.spectral_decompose(rho)
            recon = density_from_decomposition(sd)
            assert np.linalg.norm(recon.matrix - rho.matrix) <= 1e-9
            # eigenvector orthonormality through the coefficient matrices
            for i, a in enumerate(sd.coeff_matrices):
                for j, b in enumerate(sd.coeff_matrices):
                    ip = np.vdot(a, b)
                    assert abs(ip - (1.0 if i == j else 0.0)) < 1e-10


class TestApplyLocalUnitary:
    def test_identity_is_noop(self):
        rho = lq.random_density(2, 3, seed=21)
        out = lq.apply_local_unitary(rho, np.eye(2), np.eye(2))
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)

    def test_pure_state_coefficient_law(self):
        # on a pure state the coefficient matrix maps to U1 A U2^T
        rho = lq.random_density(2, 1, seed=22)
        rng = np.random.default_rng(23)
        u1, u2 = lq.haar_unitary(2, rng), lq.haar_unitary(2, rng)
        a = lq.spectral_decompose(rho).coeff_matrices[0]
        a2 = lq.spectral_decompose(lq.apply_local_unitary(rho, u1, u2)).coeff_matrices[0]
        target = u1 @ a @ u2.T
        overlap = abs(np.vdot(a2, target))
        assert abs(overlap - 1.0) < 1e-10  # equal up to a global phase

    def test_flip_permutes_diagonal(self):
        rho = lq.validate_density(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), 2)
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        out = lq.apply_local_unitary(rho, x, np.eye(2))
        np.testing.assert_allclose(
            out.matrix, np.diag([0.0, 0.0, 0.5, 0.5]).astype(complex), atol=1e-14
        )

    def test_rejects_non_unitary(self):
        rho = lq.random_density(2, 2, seed=24)
        with pytest.raises(NotUnitary):
            lq.apply_local_unitary(rho, 2.0 * np.eye(2), np.eye(2))

    def test_preserves_power_traces(self):
        for seed in range(5):
            rho, rho2, _, _ = orbit_pair(3, 1 + seed % 9, seed=30 + seed)
            np.testing.assert_allclose(
                lq.power_traces(rho), lq.power_traces(rho2), atol=1e-9
            )

    def test_orbit_eigenvalues_and_coefficients(self):
        for seed in range(5):
            rho, rho2, u1, u2 = orbit_pair(2, 1 + seed % 4, seed=40 + seed)
            sd, sd2 = lq.spectral_decompose(rho), lq.spectral_decompose(rho2)
            np.testing.assert_allclose(sd.eigenvalues, sd2.eigenvalues, atol=1e-9)
            for block in sd.blocks:
                if len(block) > 1:
                    continue
                i = block[0]
                target = u1 @ sd.coeff_matrices[i] @ u2.T
                overlap = abs(np.vdot(sd2.coeff_matrices[i], target))
                assert abs(overlap - 1.0) < 1e-9  # phase freedom only


class TestCoefficientReshape:
    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_is_exact(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        v = rng.standard_normal(n * n) + 1j * rng.standard_normal(n * n)
        assert np.array_equal(coeff_to_vector(vector_to_coeff(v, n)), v)

    def test_basis_vectors(self):
        np.testing.assert_array_equal(coeff_to_vector(unit(0, 0)), [1, 0, 0, 0])
        a = np.diag([1, 1]).astype(complex) / np.sqrt(2)
        v = coeff_to_vector(a)
        np.testing.assert_allclose(v, np.array([1, 0, 0, 1]) / np.sqrt(2))


class TestDecompositionHelpers:
    def test_transform_matches_density_level(self):
        rho = lq.random_density(2, 3, seed=50)
        sd = lq.spectral_decompose(rho)
        rng = np.random.default_rng(51)
        u1, u2 = lq.haar_unitary(2, rng), lq.haar_unitary(2, rng)
        moved = transform_decomposition(sd, u1, u2)
        lhs = density_from_decomposition(moved)
        rhs = lq.apply_local_unitary(rho, u1, u2)
        assert np.linalg.norm(lhs.matrix - rhs.matrix) <= 1e-10

    def test_remix_preserves_density(self):
        rho = lq.random_density(2, 3, degeneracy_profile=[2, 1], seed=52)
        sd = lq.spectral_decompose(rho)
        block = next(b for b in sd.blocks if len(b) == 2)
        v = lq.haar_unitary(2, 53)
        remixed = remix_block(sd, block, v)
        assert np.linalg.norm(
            density_from_decomposition(remixed).matrix - rho.matrix
        ) <= 1e-10

    def test_decomposition_from_coeffs_checks_norms(self):
        with pytest.raises(ValueError):
            decomposition_from_coeffs(2, [1.0], [2.0 * unit(0, 0)])
