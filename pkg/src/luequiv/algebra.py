"""Matrix algebras spanned by word products of coefficient matrices.

The left algebra is generated by the products A_i A_j^dagger, the right
algebra by A_i^dagger A_j.  A deterministic breadth-first closure admits a
product as a new basis element exactly when its component orthogonal to
the current span (under the sesquilinear form Tr(s t^dagger)) is larger
than a relative threshold, so the admitted word list is canonical and two
states with equal word-trace invariants admit the same words.  The Gram
matrix uses the bilinear form Tr(s t), which stays nonsingular on a true
basis; duals and structure constants follow from its inverse.

Basis elements are the orthonormalization (sesquilinear form, admission
order) of the admitted word products.  The Gram-Schmidt coefficients are
functions of word-trace inner products, which are themselves invariants,
so two states with equal invariants still get element-for-element
corresponding bases; and because the algebra is closed under conjugate
transposition, the bilinear Gram of a sesquilinearly orthonormal basis is
a unitary matrix, keeping its determinant at modulus one instead of
shrinking multiplicatively with the dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, GramSingular, NotInSpan
from .invariants import Word
from .linalg import frob
from .states import SpectralDecomposition

_ZERO_FLOOR = 1e-12


@dataclass
class AlgebraBasis:
    """Canonical word basis of the left or right algebra of one state."""

    side: str
    dim_local: int
    words: tuple[Word, ...]
    elements: tuple[np.ndarray, ...]
    gram: np.ndarray
    gram_inverse: np.ndarray
    duals: tuple[np.ndarray, ...]
    structure: np.ndarray  # structure[i, j, k] = Tr(e_i e_j dual_k)

    @property
    def dim(self) -> int:
        return len(self.elements)


def generator_matrices(sd: SpectralDecomposition, side: str) -> list[tuple[Word, np.ndarray]]:
    """Length-one word generators in lexicographic (i, j) order."""
    out = []
    for i in range(sd.rank):
        for j in range(sd.rank):
            a, b = sd.coeff_matrices[i], sd.coeff_matrices[j]
            m = a @ b.conj().T if side == "L" else a.conj().T @ b
            out.append((Word(side, ((i + 1, j + 1),)), m))
    return out


class _Screen:
    """Incremental orthonormal frame for linear-independence tests."""

    def __init__(self, eps_indep: float):
        self.eps = eps_indep
        self.frame: list[np.ndarray] = []

    def admit(self, mat: np.ndarray) -> np.ndarray | None:
        """Orthonormalized component of ``mat`` outside the span, if any."""
        v = mat.reshape(-1)
        norm = float(np.linalg.norm(v))
        if norm <= _ZERO_FLOOR:
            return None
        r = v.copy()
        for _ in range(2):  # re-orthogonalize for stability
            for q in self.frame:
                r = r - np.vdot(q, r) * q
        res = float(np.linalg.norm(r))
        if res <= self.eps * norm:
            return None
        r = r / res
        self.frame.append(r)
        return r.reshape(mat.shape)


def _closure(
    generators: list[tuple[Word, np.ndarray]],
    dim_local: int,
    eps_indep: float,
) -> tuple[list[Word], list[np.ndarray]]:
    screen = _Screen(eps_indep)
    words: list[Word] = []
    elements: list[np.ndarray] = []
    gens = []
    for w, m in generators:
        norm = frob(m)
        if norm > _ZERO_FLOOR:
            gens.append((w, m / norm))
        admitted = screen.admit(m)
        if admitted is not None:
            words.append(w)
            elements.append(admitted)
    cap = dim_local * dim_local
    i = 0
    while i < len(elements):
        for gw, gm in gens:
            admitted = screen.admit(elements[i] @ gm)
            if admitted is not None:
                words.append(Word(words[i].side, words[i].letters + gw.letters))
                elements.append(admitted)
                if len(elements) > cap:
                    raise BudgetExceeded("algebra closure exceeded the dimension bound")
        i += 1
    return words, elements


def _finish_basis(
    side: str,
    dim_local: int,
    words: list[Word],
    elements: list[np.ndarray],
    eps_det: float,
) -> AlgebraBasis:
    m = len(elements)
    gram = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(i, m):
            gram[i, j] = gram[j, i] = np.trace(elements[i] @ elements[j])
    det = complex(np.linalg.det(gram))
    if abs(det) <= eps_det:
        raise GramSingular(f"|det Gram| = {abs(det):.3e} is below the floor")
    gram_inv = np.linalg.inv(gram)
    duals = tuple(
        sum(gram_inv[k, j] * elements[j] for j in range(m)) for k in range(m)
    )
    structure = np.empty((m, m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            prod = elements[i] @ elements[j]
            for k in range(m):
                structure[i, j, k] = np.trace(prod @ duals[k])
    return AlgebraBasis(
        side=side,
        dim_local=dim_local,
        words=tuple(words),
        elements=tuple(elements),
        gram=gram,
        gram_inverse=gram_inv,
        duals=duals,
        structure=structure,
    )


def build_algebra(
    sd: SpectralDecomposition, side: str, tol: Tolerances = DEFAULT_TOL
) -> AlgebraBasis:
    """Breadth-first closure of the word algebra with a canonical basis."""
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    words, elements = _closure(generator_matrices(sd, side), sd.dim_local, tol.eps_indep)
    return _finish_basis(side, sd.dim_local, words, elements, tol.eps_det)


def algebra_from_words(
    sd: SpectralDecomposition,
    words: tuple[Word, ...],
    tol: Tolerances = DEFAULT_TOL,
) -> AlgebraBasis:
    """Evaluate a given word list on another state's decomposition.

    Used for the word-for-word basis correspondence between two states;
    raises GramSingular when the words fail to form a basis there.
    """
    from .invariants import word_matrix

    if not words:
        raise ValueError("empty word list")
    side = words[0].side
    screen = _Screen(tol.eps_indep)
    elements = []
    for w in words:
        admitted = screen.admit(word_matrix(sd, w))
        if admitted is None:
            raise GramSingular(f"word {w.key()} is dependent on this state")
        elements.append(admitted)
    return _finish_basis(side, sd.dim_local, list(words), elements, tol.eps_det)


def gram_det(basis: AlgebraBasis) -> float:
    """|det| of the bilinear Gram matrix."""
    return float(abs(np.linalg.det(basis.gram)))


def express_in_basis(
    basis: AlgebraBasis, x: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Coefficients of x in the basis via the dual elements."""
    coeffs = np.array([complex(np.trace(x @ d)) for d in basis.duals])
    recon = sum(c * e for c, e in zip(coeffs, basis.elements))
    if frob(x - recon) > tol.eps_span * max(1.0, frob(x)):
        raise NotInSpan(f"residual {frob(x - recon):.3e} exceeds the span tolerance")
    return coeffs
