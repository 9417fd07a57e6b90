"""Trace-polynomial invariants of a spectral decomposition.

A *word* is an ordered sequence of index pairs.  On the left side the pair
(i, j) denotes the factor A_i A_j^dagger, on the right side A_i^dagger A_j;
the word's value is the trace of the ordered product.  Values are invariant
under conjugation of all A_i by local unitaries, but an individual value
also depends on the decomposition through the per-eigenvector phase
freedom.  A word is *balanced* when every index occurs as often in first
as in second positions; balanced values are phase-free.  For a degeneracy
block, summing a patterned word over all index assignments inside the
block gives values that are additionally stable under unitary remixing of
the block's eigenvectors; those sums are the block invariants.

Signatures assembled here therefore contain only quantities that are
decomposition-independent: power traces of the density matrix, balanced
words over singleton (nondegenerate) indices, and patterned block sums.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, IndexOutOfRange, PatternMismatch
from .states import DensityMatrix, SpectralDecomposition, spectral_decompose

SIDES = ("L", "R")


@dataclass(frozen=True)
class Word:
    """An index word; letters are 1-based (i, j) pairs."""

    side: str
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError("side must be 'L' or 'R'")
        if len(self.letters) < 1:
            raise ValueError("a word has at least one letter")

    def canonical(self) -> "Word":
        """Lexicographically minimal cyclic rotation (trace cyclicity)."""
        rots = [self.letters[r:] + self.letters[:r] for r in range(len(self.letters))]
        return Word(self.side, min(rots))

    def key(self) -> str:
        return self.side + ":" + "".join(f"({i},{j})" for i, j in self.letters)

    def is_balanced(self) -> bool:
        count: dict[int, int] = {}
        for i, j in self.letters:
            count[i] = count.get(i, 0) + 1
            count[j] = count.get(j, 0) - 1
        return all(v == 0 for v in count.values())


def power_traces(rho: DensityMatrix) -> np.ndarray:
    """Tr(rho^s) for s = 1 .. N^2, computed from the full spectrum."""
    lams = np.linalg.eigvalsh(rho.matrix)
    nn = rho.dim_local * rho.dim_local
    return np.array([float(np.sum(lams**s)) for s in range(1, nn + 1)])


def word_matrix(sd: SpectralDecomposition, word: Word) -> np.ndarray:
    """Ordered product of the word's factors."""
    n = sd.rank
    out = np.eye(sd.dim_local, dtype=complex)
    for i, j in word.letters:
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexOutOfRange(f"letter ({i},{j}) exceeds rank {n}")
        a, b = sd.coeff_matrices[i - 1], sd.coeff_matrices[j - 1]
        out = out @ (a @ b.conj().T if word.side == "L" else a.conj().T @ b)
    return out


def word_trace(sd: SpectralDecomposition, word: Word) -> complex:
    return complex(np.trace(word_matrix(sd, word)))


# ---------------------------------------------------------------------------
# balanced word enumeration (vectorized; letters held as 0-based index pairs)


def _partitions(total: int, max_part: int | None = None):
    """Integer partitions of ``total`` as descending tuples."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


def count_balanced_words(n: int, length: int) -> int:
    """Number of balanced words of exactly this length (before cyclic dedup)."""
    total = 0
    for parts in _partitions(length):
        p = len(parts)
        if p > n:
            continue
        ways = 1
        for k in range(p):
            ways *= n - k
        mult: dict[int, int] = {}
        for s in parts:
            mult[s] = mult.get(s, 0) + 1
        for r in mult.values():
            ways //= math.factorial(r)
        multinom = math.factorial(length)
        for s in parts:
            multinom //= math.factorial(s)
        total += ways * multinom * multinom
    return total


def _balanced_pair_arrays(n: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    """All (left, right) index-sequence pairs sharing a multiset, 0-based."""
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for seq in itertools.product(range(n), repeat=length):
        groups.setdefault(tuple(sorted(seq)), []).append(seq)
    lefts, rights = [], []
    for key in sorted(groups):
        perms = np.array(groups[key], dtype=np.int64)
        p = perms.shape[0]
        lefts.append(np.repeat(perms, p, axis=0))
        rights.append(np.tile(perms, (p, 1)))
    if not lefts:
        return np.zeros((0, length), np.int64), np.zeros((0, length), np.int64)
    return np.concatenate(lefts), np.concatenate(rights)


def _canonical_letter_arrays(n: int, length: int) -> np.ndarray:
    """Canonical balanced words of one length as an (W, length, 2) array.

    Canonical form is the lexicographically minimal cyclic rotation; output
    rows are sorted by their packed integer code, which makes the order
    deterministic and stable across calls.
    """
    lefts, rights = _balanced_pair_arrays(n, length)
    if lefts.shape[0] == 0:
        return np.zeros((0, length, 2), np.int64)
    codes = lefts * n + rights  # (W, L) letter codes in [0, n^2)
    base = n * n
    powers = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    packed = np.stack(
        [np.roll(codes, -r, axis=1) @ powers for r in range(length)]
    )  # (L, W)
    best_rot = np.argmin(packed, axis=0)
    cols = (np.arange(length)[None, :] + best_rot[:, None]) % length
    canon = codes[np.arange(codes.shape[0])[:, None], cols]
    canon_packed = np.min(packed, axis=0)
    _, first = np.unique(canon_packed, return_index=True)
    canon = canon[np.sort(first)]
    order = np.argsort(canon @ powers, kind="stable")
    canon = canon[order]
    return np.stack([canon // n, canon % n], axis=2)


def enumerate_balanced_words(
    n: int, max_len: int, side: str = "L", limit: int | None = None
) -> list[Word]:
    """All canonical balanced words up to ``max_len`` in deterministic order."""
    if n < 1 or max_len < 1:
        raise ValueError("rank and max length must be at least 1")
    total = 0
    for length in range(1, max_len + 1):
        total += count_balanced_words(n, length)
        if limit is not None and total > limit:
            raise BudgetExceeded(
                f"balanced enumeration needs {total} evaluations, limit is {limit}"
            )
    words = []
    for length in range(1, max_len + 1):
        arr = _canonical_letter_arrays(n, length)
        for row in arr:
            words.append(Word(side, tuple((int(i) + 1, int(j) + 1) for i, j in row)))
    return words


def _batch_word_values(
    stack: np.ndarray, arr: np.ndarray, side: str
) -> np.ndarray:
    """Evaluate many equal-length words at once.

    ``stack`` is the (n, N, N) array of coefficient matrices; ``arr`` holds
    0-based letters with shape (W, L, 2).
    """
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    dstack = stack.conj().transpose(0, 2, 1)
    first, second = (stack, dstack) if side == "L" else (dstack, stack)
    prod = first[arr[:, 0, 0]] @ second[arr[:, 0, 1]]
    for k in range(1, arr.shape[1]):
        prod = prod @ (first[arr[:, k, 0]] @ second[arr[:, k, 1]])
    return np.einsum("wii->w", prod)


# ---------------------------------------------------------------------------
# degeneracy-block invariants


def cycle_type_representatives(tau: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(cycle_type, representative permutation) pairs, identity type first.

    The representative realises the cycle type on consecutive slots; only
    one permutation per type is evaluated (conjugate patterns are dropped).
    """
    out = []
    for parts in sorted(tuple(sorted(p)) for p in _partitions(tau)):
        perm = list(range(tau))
        start = 0
        for c in parts:
            for k in range(c):
                perm[start + k] = start + (k + 1) % c
            start += c
        out.append((parts, tuple(perm)))
    return out


def _block_network_value(stack: np.ndarray, pattern: tuple[int, ...], side: str) -> complex:
    """Contract the patterned block sum as a tensor network.

    ``stack`` holds the block's coefficient matrices, shape (r, N, N).  The
    value equals the literal sum over all index assignments of the word
    whose dagger slot after position s carries label pattern[(s+1) % tau].
    """
    tau = len(pattern)
    g = np.einsum("iab,icd->abcd", stack, stack.conj())
    inv = [0] * tau
    for s, u in enumerate(pattern):
        inv[u] = s
    syms = string.ascii_lowercase
    a = syms[:tau]
    b = syms[tau : 2 * tau]
    subs = []
    for u in range(tau):
        s_star = inv[u]
        prev = (s_star - 1) % tau
        if side == "L":
            subs.append(a[u] + b[u] + a[s_star] + b[prev])
        else:
            subs.append(b[prev] + a[s_star] + b[u] + a[u])
    return complex(np.einsum(",".join(subs) + "->", *([g] * tau), optimize=True))


def block_invariant(
    sd: SpectralDecomposition,
    block: tuple[int, ...],
    pattern: tuple[int, ...],
    side: str = "L",
) -> complex:
    """Patterned word sum over one degeneracy block (0-based positions).

    ``pattern`` is a permutation of range(len(pattern)); slot s of the word
    pairs A_{f(s)} with the dagger of A_{f(pattern[(s+1) % tau])}, and the
    sum runs over all assignments f of block indices to slots.  The value
    is invariant under any unitary remix of the block's eigenvectors.
    """
    if side not in SIDES:
        raise ValueError("side must be 'L' or 'R'")
    tau = len(pattern)
    if tau < 1 or sorted(pattern) != list(range(tau)):
        raise PatternMismatch(f"pattern {pattern} is not a permutation of slots")
    for p in block:
        if not (0 <= p < sd.rank):
            raise IndexOutOfRange(f"block position {p} exceeds rank {sd.rank}")
    stack = np.stack([sd.coeff_matrices[p] for p in block])
    return _block_network_value(stack, tuple(pattern), side)


# ---------------------------------------------------------------------------
# signatures


@dataclass
class WordGroup:
    """All balanced words of one side and length, evaluated in bulk."""

    side: str
    length: int
    letters: np.ndarray  # (W, length, 2), 1-based original indices
    values: np.ndarray   # (W,) complex


def _word_key(side: str, row) -> str:
    return side + ":" + "".join(f"({int(i)},{int(j)})" for i, j in row)


@dataclass
class InvariantSignature:
    """Decomposition-independent invariants of one density matrix."""

    dim_local: int
    rank: int
    block_sizes: tuple[int, ...]
    power_traces: np.ndarray
    balanced_groups: list[WordGroup]
    block_invariants: dict[str, complex]
    tau_balanced: int
    tau_block: int
    _balanced_cache: dict[str, complex] | None = field(default=None, repr=False)

    @property
    def balanced_words(self) -> dict[str, complex]:
        """Canonical word key -> value; built on demand (keys are slow)."""
        if self._balanced_cache is None:
            out: dict[str, complex] = {}
            for g in self.balanced_groups:
                for row, val in zip(g.letters, g.values):
                    out[_word_key(g.side, row)] = complex(val)
            self._balanced_cache = out
        return self._balanced_cache


def _balanced_budget_length(n_letters: int, cap: int, limit: int) -> int:
    """Longest word length whose cumulative two-sided count fits the budget."""
    total, best = 0, 0
    for length in range(1, cap + 1):
        total += 2 * count_balanced_words(n_letters, length)
        if total > limit:
            break
        best = length
    return best


def _block_key(side: str, block: tuple[int, ...], tau: int, ctype: tuple[int, ...]) -> str:
    ids = ",".join(str(p + 1) for p in block)
    cts = ",".join(str(c) for c in ctype)
    return f"{side}:block({ids}):len{tau}:type({cts})"


def fingerprint_from_decomposition(
    sd: SpectralDecomposition,
    power: np.ndarray,
    tol: Tolerances = DEFAULT_TOL,
    blocks: tuple[tuple[int, ...], ...] | None = None,
    tau_cap: int | None = None,
) -> InvariantSignature:
    """Assemble the signature from an existing decomposition."""
    if blocks is None:
        blocks = sd.blocks
    cap = tau_cap if tau_cap is not None else tol.effective_tau_cap(sd.dim_local)
    singles = sorted(b[0] for b in blocks if len(b) == 1)
    groups: list[WordGroup] = []
    tau_bal = 0
    if singles:
        tau_bal = _balanced_budget_length(len(singles), cap, tol.word_eval_limit)
        sub = np.stack([sd.coeff_matrices[p] for p in singles])
        orig = np.array(singles, dtype=np.int64)
        for length in range(1, tau_bal + 1):
            arr = _canonical_letter_arrays(len(singles), length)
            mapped = orig[arr] + 1  # 1-based original indices
            for side in SIDES:
                vals = _batch_word_values(sub, arr, side)
                groups.append(WordGroup(side, length, mapped, vals))
    block_vals: dict[str, complex] = {}
    for block in blocks:
        if len(block) == 1:
            continue
        stack = np.stack([sd.coeff_matrices[p] for p in block])
        for side in SIDES:
            for tau in range(1, cap + 1):
                for ctype, perm in cycle_type_representatives(tau):
                    block_vals[_block_key(side, block, tau, ctype)] = _block_network_value(
                        stack, perm, side
                    )
    return InvariantSignature(
        dim_local=sd.dim_local,
        rank=sd.rank,
        block_sizes=tuple(len(b) for b in blocks),
        power_traces=np.asarray(power, dtype=float),
        balanced_groups=groups,
        block_invariants=block_vals,
        tau_balanced=tau_bal,
        tau_block=cap,
    )


def fingerprint(
    rho: DensityMatrix, tol: Tolerances = DEFAULT_TOL, tau_cap: int | None = None
) -> InvariantSignature:
    """Signature of a density matrix; deterministic given input bits."""
    sd = spectral_decompose(rho, tol)
    return fingerprint_from_decomposition(sd, power_traces(rho), tol, tau_cap=tau_cap)


def values_close(a: complex, b: complex, eps: float) -> bool:
    """Relative comparison above magnitude one, absolute below."""
    return abs(a - b) <= eps * max(1.0, abs(a), abs(b))


def compare_signatures(
    a: InvariantSignature, b: InvariantSignature, eps_inv: float
) -> tuple[str, str, complex, complex] | None:
    """First mismatching entry as (kind, key, value_a, value_b), else None."""
    if a.dim_local != b.dim_local:
        return ("structure", "dim_local", a.dim_local, b.dim_local)
    if a.rank != b.rank:
        return ("structure", "rank", a.rank, b.rank)
    if a.block_sizes != b.block_sizes:
        return ("structure", "block_sizes", 0, 0)
    for s, (x, y) in enumerate(zip(a.power_traces, b.power_traces), start=1):
        if not values_close(x, y, eps_inv):
            return ("power_trace", f"J^{s}", complex(x), complex(y))
    if len(a.balanced_groups) != len(b.balanced_groups):
        return ("structure", "balanced_groups", 0, 0)
    for ga, gb in zip(a.balanced_groups, b.balanced_groups):
        if ga.side != gb.side or ga.letters.shape != gb.letters.shape or not np.array_equal(
            ga.letters, gb.letters
        ):
            return ("structure", f"{ga.side}:len{ga.length}", 0, 0)
        va, vb = ga.values, gb.values
        bad = np.abs(va - vb) > eps_inv * np.maximum(
            1.0, np.maximum(np.abs(va), np.abs(vb))
        )
        if np.any(bad):
            k = int(np.argmax(bad))
            return (
                "balanced_word",
                _word_key(ga.side, ga.letters[k]),
                complex(va[k]),
                complex(vb[k]),
            )
    for key, val in a.block_invariants.items():
        if key not in b.block_invariants:
            return ("structure", key, val, 0j)
        if not values_close(val, b.block_invariants[key], eps_inv):
            return ("block_invariant", key, val, b.block_invariants[key])
    return None
