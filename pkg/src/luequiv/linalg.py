"""Dense complex matrix kernel: eigendecomposition, SVD, polar form,
Kronecker products, partial traces, trace inner products and null spaces.

All functions are pure, operate on plain ``numpy`` complex arrays, and are
deterministic given identical input bits (LAPACK drivers, no randomized
pivoting).
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .config import DEFAULT_TOL
from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def frob(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def ensure_matrix(m, square: bool = False) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix contains non-finite entries")
    return a


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray   # real, descending
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues


class SVDResult(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray     # nonnegative, descending
    right: np.ndarray         # M = left @ diag(singulars) @ right^dagger


class PolarResult(NamedTuple):
    unitary_part: np.ndarray
    positive_part: np.ndarray  # Hermitian PSD, M = unitary_part @ positive_part


def hermitian_eigendecompose(m, eps_herm: float = DEFAULT_TOL.eps_herm) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = ensure_matrix(m, square=True)
    if frob(a - dagger(a)) > eps_herm * max(1.0, frob(a)):
        raise NotHermitian(
            f"||M - M^dagger||_F = {frob(a - dagger(a)):.3e} exceeds tolerance"
        )
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    return HermitianEig(w[order], v[:, order])


def svd(m) -> SVDResult:
    """Singular value decomposition, singular values descending."""
    a = ensure_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(str(exc)) from exc
    return SVDResult(u, s, dagger(vh))


def polar_decompose(m) -> PolarResult:
    """Polar decomposition M = u P with u unitary and P Hermitian PSD.

    Computed from the SVD: u = left @ right^dagger, P = right diag(s) right^dagger.
    """
    a = ensure_matrix(m, square=True)
    res = svd(a)
    unitary = res.left @ dagger(res.right)
    positive = res.right @ np.diag(res.singulars) @ dagger(res.right)
    return PolarResult(unitary, positive)


def kron(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    return np.kron(ensure_matrix(a), ensure_matrix(b))


def partial_trace(m, which: str, n: int) -> np.ndarray:
    """Trace out one tensor factor of a matrix on H (x) H.

    ``which`` names the subsystem that is traced out: ``"second"`` keeps the
    first factor, ``"first"`` keeps the second.
    """
    a = ensure_matrix(m, square=True)
    if a.shape[0] != n * n:
        raise DimensionMismatch(f"expected a {n * n}x{n * n} matrix, got {a.shape}")
    if which not in ("first", "second"):
        raise ValueError("which must be 'first' or 'second'")
    r = a.reshape(n, n, n, n)  # indices (k, l, k', l'), row-major |kl>
    if which == "second":
        return np.einsum("abcb->ac", r)
    return np.einsum("abac->bc", r)


def trace_inner(sigma, tau) -> complex:
    """Sesquilinear trace form Tr(sigma tau^dagger)."""
    a = ensure_matrix(sigma, square=True)
    b = ensure_matrix(tau, square=True)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(b, a))


def nullspace(mat: np.ndarray, eps_null: float = DEFAULT_TOL.eps_null) -> np.ndarray:
    """Orthonormal basis of the approximate null space of ``mat``.

    Returns an array of shape (k, cols); rows are null vectors with singular
    value at most ``eps_null`` times the largest singular value.
    """
    a = np.asarray(mat, dtype=complex)
    if a.size == 0:
        return np.eye(a.shape[1], dtype=complex)
    # full right singular basis is only needed when rows < cols
    u, s, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    if s[0] <= 1e-12:  # the whole system is rounding noise
        return np.eye(a.shape[1], dtype=complex)
    cutoff = eps_null * s[0]
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj()


def lstsq_nullspace(
    constraints: Sequence[tuple[np.ndarray, np.ndarray]],
    dim: int,
    eps_null: float = DEFAULT_TOL.eps_null,
) -> list[np.ndarray]:
    """Solve the homogeneous system {P X = X Q} for a dim x dim unknown X.

    Each constraint is a pair (P, Q) imposing P @ X - X @ Q = 0.  Returns an
    orthonormal (vectorized) basis of the approximate null space; the empty
    list when only the zero solution exists.
    """
    eye = np.eye(dim, dtype=complex)
    blocks = []
    for p, q in constraints:
        p = ensure_matrix(p, square=True)
        q = ensure_matrix(q, square=True)
        if p.shape[0] != dim or q.shape[0] != dim:
            raise DimensionMismatch("constraint matrices must match the unknown size")
        # row-major vec: vec(P X Q) = kron(P, Q^T) vec(X)
        blocks.append(np.kron(p, eye) - np.kron(eye, q.T))
    if not blocks:
        return [row.reshape(dim, dim) for row in np.eye(dim * dim, dtype=complex)]
    vecs = nullspace(np.vstack(blocks), eps_null)
    return [v.reshape(dim, dim) for v in vecs]
