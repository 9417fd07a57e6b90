"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

import luequiv as lq
from luequiv.states import decomposition_from_coeffs


def unit(i: int, j: int, n: int = 2) -> np.ndarray:
    """Matrix unit E_ij (0-based)."""
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def bell_density() -> lq.DensityMatrix:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return lq.validate_density(np.outer(v, v.conj()), 2)


@pytest.fixture
def diag_half_pair():
    """Rank-2 diagonal states with equal spectra but different block sums.

    The first is diag(1/2, 1/2, 0, 0) in the product basis, the second
    diag(1/2, 0, 1/2, 0); they are not locally equivalent although every
    power trace matches.
    """
    a = lq.validate_density(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), 2)
    b = lq.validate_density(np.diag([0.5, 0.0, 0.5, 0.0]).astype(complex), 2)
    return a, b


@pytest.fixture
def diag_half_decompositions():
    """Hand-built decompositions of the pair above: A_1 = E11, A_2 = E12
    for the first state and A'_2 = E21 for the second."""
    sd_a = decomposition_from_coeffs(2, [0.5, 0.5], [unit(0, 0), unit(0, 1)])
    sd_b = decomposition_from_coeffs(2, [0.5, 0.5], [unit(0, 0), unit(1, 0)])
    return sd_a, sd_b


def orbit_pair(n: int, rank: int, seed: int, profile=None):
    """A seeded random state and its image under seeded local unitaries."""
    rho = lq.random_density(n, rank, degeneracy_profile=profile, seed=seed)
    rng = np.random.default_rng(seed + 10_000)
    u1 = lq.haar_unitary(n, rng)
    u2 = lq.haar_unitary(n, rng)
    return rho, lq.apply_local_unitary(rho, u1, u2), u1, u2
