"""Decide local-unitary equivalence of bipartite density matrices.

The library computes trace-polynomial invariants of a bipartite density
matrix (power traces, word traces over eigenvector coefficient matrices,
and degeneracy-block sums), builds the matrix algebras those words span,
and reconstructs explicit local-unitary certificates through intertwiners
and polar decompositions.  A command line front end handles JSON state
files; see :mod:`luequiv.cli`.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOL, Tolerances
from .states import (
    DensityMatrix,
    SpectralDecomposition,
    apply_local_unitary,
    spectral_decompose,
    validate_density,
)
from .invariants import (
    InvariantSignature,
    Word,
    block_invariant,
    compare_signatures,
    enumerate_balanced_words,
    fingerprint,
    power_traces,
    word_trace,
)
from .algebra import AlgebraBasis, algebra_from_words, build_algebra, express_in_basis, gram_det
from .decider import (
    Certificate,
    EquivalenceVerdict,
    Intertwiner,
    Witness,
    certify,
    decide,
    extract_unitaries,
    find_intertwiner,
)
from .testkit import OracleResult, brute_force_oracle, haar_unitary, random_density

__all__ = [
    "DEFAULT_TOL",
    "Tolerances",
    "DensityMatrix",
    "SpectralDecomposition",
    "validate_density",
    "spectral_decompose",
    "apply_local_unitary",
    "Word",
    "InvariantSignature",
    "power_traces",
    "word_trace",
    "block_invariant",
    "enumerate_balanced_words",
    "fingerprint",
    "compare_signatures",
    "AlgebraBasis",
    "build_algebra",
    "algebra_from_words",
    "gram_det",
    "express_in_basis",
    "EquivalenceVerdict",
    "Witness",
    "Certificate",
    "Intertwiner",
    "decide",
    "certify",
    "find_intertwiner",
    "extract_unitaries",
    "haar_unitary",
    "random_density",
    "brute_force_oracle",
    "OracleResult",
    "__version__",
]
