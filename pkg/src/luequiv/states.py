"""Density-matrix validation, spectral decomposition into coefficient
matrices, degeneracy blocks, and local unitary action.

Basis convention: the product basis |kl> of H (x) H is ordered row-major
with the first factor as the slow index, so the N^2-component eigenvector
v reshapes to the N x N coefficient matrix A with A[k, l] = v[k * N + l].
Eigenvector phases are left exactly as the eigensolver returns them; all
phase handling is owned by the decision pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPositiveSemidefinite,
    NotUnitary,
    NotUnitTrace,
)
from .linalg import dagger, ensure_matrix, frob, hermitian_eigendecompose, kron


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.flags.writeable = False
    return out


def _readonly_real(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class DensityMatrix:
    """A validated N^2 x N^2 density matrix on H (x) H."""

    dim_local: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.dim_local * self.dim_local


@dataclass(frozen=True)
class SpectralDecomposition:
    """Positive part of the spectrum of a density matrix.

    ``eigenvalues`` are descending and strictly above the rank cutoff;
    ``coeff_matrices[i]`` is the N x N reshape of the i-th eigenvector;
    ``blocks`` partitions 0..rank-1 into maximal degeneracy blocks
    (0-based positions, consecutive by construction).
    """

    dim_local: int
    eigenvalues: np.ndarray
    coeff_matrices: tuple[np.ndarray, ...]
    blocks: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.coeff_matrices)

    def singleton_indices(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.blocks if len(b) == 1)

    def has_degenerate_block(self) -> bool:
        return any(len(b) > 1 for b in self.blocks)


def validate_density(matrix, n: int, tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; never repairs input."""
    m = ensure_matrix(matrix, square=True)
    if n < 1 or m.shape[0] != n * n:
        raise DimensionMismatch(
            f"matrix is {m.shape[0]}x{m.shape[0]}, expected {n * n}x{n * n} for N={n}"
        )
    if frob(m - dagger(m)) > tol.eps_herm * max(1.0, frob(m)):
        raise NotHermitian("density matrix is not Hermitian within tolerance")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol.eps_trace:
        raise NotUnitTrace(f"trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    lo = float(np.linalg.eigvalsh(m)[0])
    if lo < -tol.eps_psd:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {lo:.3e} is negative")
    return DensityMatrix(n, _readonly(m))


def _degeneracy_blocks(lams: np.ndarray, n: int, eps_deg: float) -> tuple[tuple[int, ...], ...]:
    # Transitive chaining on the descending spectrum: consecutive eigenvalues
    # closer than the gap threshold land in the same block.
    if len(lams) == 0:
        return ()
    scale = max(float(lams[0]), 1.0 / (n * n))
    blocks, current = [], [0]
    for i in range(1, len(lams)):
        if lams[i - 1] - lams[i] <= eps_deg * scale:
            current.append(i)
        else:
            blocks.append(tuple(current))
            current = [i]
    blocks.append(tuple(current))
    return tuple(blocks)


def spectral_decompose(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecompose a density matrix and reshape eigenvectors to A_i."""
    n = rho.dim_local
    eig = hermitian_eigendecompose(rho.matrix, tol.eps_herm)
    keep = eig.eigenvalues > tol.eps_rank
    lams = eig.eigenvalues[keep]
    vecs = eig.eigenvectors[:, keep]
    coeffs = tuple(_readonly(vecs[:, i].reshape(n, n)) for i in range(vecs.shape[1]))
    return SpectralDecomposition(
        n, _readonly_real(lams), coeffs, _degeneracy_blocks(lams, n, tol.eps_deg)
    )


def coeff_to_vector(a: np.ndarray) -> np.ndarray:
    """Inverse of the eigenvector reshape; round-trips exactly."""
    return np.asarray(a, dtype=complex).reshape(-1).copy()


def vector_to_coeff(v: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(n, n).copy()


def density_from_decomposition(sd: SpectralDecomposition) -> DensityMatrix:
    """Reassemble sum_i lambda_i |v_i><v_i| from coefficient matrices."""
    n = sd.dim_local
    out = np.zeros((n * n, n * n), dtype=complex)
    for lam, a in zip(sd.eigenvalues, sd.coeff_matrices):
        v = coeff_to_vector(a)
        out += lam * np.outer(v, v.conj())
    return DensityMatrix(n, _readonly(out))


def decomposition_from_coeffs(
    dim_local: int,
    eigenvalues,
    coeffs,
    tol: Tolerances = DEFAULT_TOL,
) -> SpectralDecomposition:
    """Build a decomposition directly from eigenvalues and A_i matrices."""
    lams = np.asarray(eigenvalues, dtype=float)
    mats = tuple(_readonly(ensure_matrix(a, square=True)) for a in coeffs)
    if len(mats) != len(lams):
        raise DimensionMismatch("one coefficient matrix per eigenvalue required")
    if any(m.shape[0] != dim_local for m in mats):
        raise DimensionMismatch("coefficient matrices must be N x N")
    if np.any(np.diff(lams) > 0):
        raise ValueError("eigenvalues must be sorted descending")
    for m in mats:
        if abs(frob(m) - 1.0) > 1e-6:
            raise ValueError("coefficient matrices must have unit Frobenius norm")
    return SpectralDecomposition(
        dim_local, _readonly_real(lams), mats, _degeneracy_blocks(lams, dim_local, tol.eps_deg)
    )


def _check_unitary(u: np.ndarray, n: int, eps: float, name: str) -> np.ndarray:
    m = ensure_matrix(u, square=True)
    if m.shape[0] != n:
        raise DimensionMismatch(f"{name} must be {n}x{n}")
    if frob(m @ dagger(m) - np.eye(n)) > eps * max(1.0, frob(m)):
        raise NotUnitary(f"{name} is not unitary within tolerance")
    return m


def apply_local_unitary(
    rho: DensityMatrix, u1, u2, tol: Tolerances = DEFAULT_TOL
) -> DensityMatrix:
    """Conjugate by U1 (x) U2 and re-validate the result."""
    n = rho.dim_local
    m1 = _check_unitary(u1, n, tol.eps_unitary, "U1")
    m2 = _check_unitary(u2, n, tol.eps_unitary, "U2")
    v = kron(m1, m2)
    return validate_density(v @ rho.matrix @ dagger(v), n, tol)


def transform_decomposition(sd: SpectralDecomposition, u1, u2) -> SpectralDecomposition:
    """Push a decomposition through U1 (x) U2 at the coefficient level.

    The image coefficients are exactly U1 A_i U2^T, with no re-diagonalization
    and hence no phase or intra-block remixing noise.
    """
    m1 = ensure_matrix(u1, square=True)
    m2 = ensure_matrix(u2, square=True)
    coeffs = tuple(_readonly(m1 @ a @ m2.T) for a in sd.coeff_matrices)
    return SpectralDecomposition(sd.dim_local, sd.eigenvalues, coeffs, sd.blocks)


def remix_block(sd: SpectralDecomposition, block: tuple[int, ...], u) -> SpectralDecomposition:
    """Remix the eigenvectors of one degeneracy block by a unitary."""
    m = ensure_matrix(u, square=True)
    if m.shape[0] != len(block):
        raise DimensionMismatch("remix unitary must match the block size")
    coeffs = list(sd.coeff_matrices)
    old = [sd.coeff_matrices[p] for p in block]
    for r, p in enumerate(block):
        coeffs[p] = _readonly(sum(m[r, s] * old[s] for s in range(len(block))))
    return SpectralDecomposition(sd.dim_local, sd.eigenvalues, tuple(coeffs), sd.blocks)
