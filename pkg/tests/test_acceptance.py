"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines and
timings as they complete.
"""

import contextlib
import io
import itertools
import json
import time

import numpy as np
import pytest

import luequiv as lq
from luequiv.cli import main as cli_main
from luequiv.decider import EQUIVALENT, INCONCLUSIVE, NOT_EQUIVALENT
from luequiv.invariants import Word, cycle_type_representatives, fingerprint_from_decomposition
from luequiv.io import save_state
from luequiv.states import remix_block, transform_decomposition

from conftest import orbit_pair


def report(num: int, name: str, ok: bool, elapsed: float, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {name} ({elapsed:.2f}s) {detail}")
    assert ok, f"criterion {num} failed: {name} {detail}"


def test_criterion_1_separating_block_invariant(tmp_path):
    start = time.time()
    rho_a = lq.validate_density(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), 2)
    rho_b = lq.validate_density(np.diag([0.5, 0.0, 0.5, 0.0]).astype(complex), 2)
    sd_a, sd_b = lq.spectral_decompose(rho_a), lq.spectral_decompose(rho_b)
    identity = (0, 1)
    val_a = lq.block_invariant(sd_a, (0, 1), identity, "L")
    val_b = lq.block_invariant(sd_b, (0, 1), identity, "L")
    exact = abs(val_a - 2.0) <= 1e-12 and abs(val_b - 4.0) <= 1e-12

    save_state(tmp_path / "a.json", rho_a.matrix, 2)
    save_state(tmp_path / "b.json", rho_b.matrix, 2)
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(
            ["compare", str(tmp_path / "a.json"), str(tmp_path / "b.json"), "--json"]
        )
    doc = json.loads(buf.getvalue())
    witness_ok = (
        code == 1
        and doc["outcome"] == "not_equivalent"
        and doc["witness"]["kind"] == "block_invariant"
        and abs(doc["witness"]["value_a"][0] - 2.0) <= 1e-12
        and abs(doc["witness"]["value_b"][0] - 4.0) <= 1e-12
    )
    elapsed = time.time() - start
    report(
        1,
        "separating degenerate-block invariant (2 vs 4)",
        exact and witness_ok and elapsed < 1.0,
        elapsed,
        f"values {val_a.real:g}/{val_b.real:g}, compare exit {code}",
    )


def test_criterion_2_orbit_invariance_of_signatures():
    start = time.time()
    failures = []
    for n in (2, 3):
        rng = np.random.default_rng(2024 + n)
        for k in range(100):
            rank = int(rng.integers(1, n * n + 1))
            rho, rho2, _, _ = orbit_pair(n, rank, seed=5000 + 100 * n + k)
            sig_a, sig_b = lq.fingerprint(rho), lq.fingerprint(rho2)
            mismatch = lq.compare_signatures(sig_a, sig_b, 1e-8)
            if mismatch is not None:
                failures.append((n, k, mismatch[:2]))
    elapsed = time.time() - start
    report(
        2,
        "signature invariance on 100 orbit triples per N in {2,3}",
        not failures and elapsed < 60.0,
        elapsed,
        f"failures: {failures[:3]}",
    )


def test_criterion_3_certificates_on_nondegenerate_orbits():
    start = time.time()
    bad = []
    inconclusive = 0
    for n in (2, 3):
        for k in range(100):
            rank = 1 + k % (n * n)
            rho, rho2, _, _ = orbit_pair(n, rank, seed=7000 + 1000 * n + k)
            verdict = lq.decide(rho, rho2)
            if verdict.outcome == INCONCLUSIVE:
                inconclusive += 1
                bad.append((n, rank, k, "inconclusive"))
            elif verdict.outcome != EQUIVALENT:
                bad.append((n, rank, k, verdict.outcome))
            elif verdict.certificate.residual > 1e-8:
                bad.append((n, rank, k, f"residual {verdict.certificate.residual:.2e}"))
            elif lq.certify(rho, rho2, verdict.certificate.u, verdict.certificate.w) > 1e-8:
                bad.append((n, rank, k, "re-verification failed"))
    elapsed = time.time() - start
    report(
        3,
        "certificates for 100 nondegenerate orbit pairs per N in {2,3}",
        not bad and elapsed < 300.0,
        elapsed,
        f"inconclusive={inconclusive} problems={bad[:3]}",
    )


def test_criterion_4_oracle_agreement():
    start = time.time()
    contradictions = []
    inconclusive = 0
    witnessed = 0
    false_equivalent = 0
    pairs = []
    for k in range(25):  # orbit pairs
        rho, rho2, _, _ = orbit_pair(2, 1 + k % 4, seed=9000 + k)
        pairs.append((rho, rho2, True))
    rng = np.random.default_rng(9100)
    for k in range(25):  # independent pairs
        ra = int(rng.integers(1, 5))
        rb = int(rng.integers(1, 5))
        pairs.append(
            (
                lq.random_density(2, ra, seed=9200 + k),
                lq.random_density(2, rb, seed=9300 + k),
                False,
            )
        )
    for idx, (rho, rho2, is_orbit) in enumerate(pairs):
        verdict = lq.decide(rho, rho2)
        oracle = lq.brute_force_oracle(rho, rho2, restarts=20, iters=2000, seed=idx)
        if verdict.outcome == INCONCLUSIVE:
            inconclusive += 1
        else:
            says_equivalent = verdict.outcome == EQUIVALENT
            if says_equivalent != oracle.converged:
                contradictions.append((idx, verdict.outcome, oracle.best_distance))
        if not is_orbit:
            if verdict.outcome == NOT_EQUIVALENT and verdict.witness is not None:
                witnessed += 1
            elif verdict.outcome == EQUIVALENT:
                false_equivalent += 1
    elapsed = time.time() - start
    ok = (
        not contradictions
        and witnessed >= 0.9 * 25
        and false_equivalent == 0
        and elapsed < 600.0
    )
    report(
        4,
        "decider matches the brute-force oracle on a 50-pair corpus",
        ok,
        elapsed,
        f"witnessed {witnessed}/25, inconclusive {inconclusive}, "
        f"contradictions {contradictions[:3]}",
    )


def test_criterion_5_gram_nonsingularity():
    start = time.time()
    worst_det = np.inf
    worst_resid = 0.0
    for n in (2, 3):
        for k in range(100):
            rank = 1 + k % (n * n)
            sd = lq.spectral_decompose(lq.random_density(n, rank, seed=11_000 + 100 * n + k))
            for side in ("L", "R"):
                basis = lq.build_algebra(sd, side)
                worst_det = min(worst_det, lq.gram_det(basis))
                worst_resid = max(
                    worst_resid,
                    float(np.linalg.norm(basis.gram @ basis.gram_inverse - np.eye(basis.dim))),
                )
    elapsed = time.time() - start
    report(
        5,
        "Gram determinants of 200 random states stay nonsingular",
        worst_det > 1e-10 and worst_resid <= 1e-8,
        elapsed,
        f"min |det|={worst_det:.3e}, max inverse residual={worst_resid:.3e}",
    )


def test_criterion_6_structure_constant_covariance():
    start = time.time()
    worst = 0.0
    for k in range(50):
        rank = 1 + k % 4
        rho, _, u1, u2 = orbit_pair(2, rank, seed=13_000 + k)
        sd = lq.spectral_decompose(rho)
        moved = transform_decomposition(sd, u1, u2)
        for side in ("L", "R"):
            basis = lq.build_algebra(sd, side)
            basis2 = lq.build_algebra(moved, side)
            if [w.key() for w in basis.words] != [w.key() for w in basis2.words]:
                worst = np.inf
                continue
            worst = max(worst, float(np.max(np.abs(basis.structure - basis2.structure))))
    elapsed = time.time() - start
    report(
        6,
        "structure constants agree along orbits (50 states, N=2)",
        worst <= 1e-8,
        elapsed,
        f"max entrywise deviation {worst:.3e}",
    )


def test_criterion_7_block_sum_remix_stability():
    start = time.time()
    worst_block_change = 0.0
    min_best_unbalanced = np.inf
    for k in range(50):
        sd = lq.spectral_decompose(
            lq.random_density(2, 3, degeneracy_profile=[2, 1], seed=15_000 + k)
        )
        block = next(b for b in sd.blocks if len(b) == 2)
        remixed = remix_block(sd, block, lq.haar_unitary(2, 16_000 + k))
        for tau in range(1, 5):
            for _, perm in cycle_type_representatives(tau):
                for side in ("L", "R"):
                    before = lq.block_invariant(sd, block, perm, side)
                    after = lq.block_invariant(remixed, block, perm, side)
                    worst_block_change = max(worst_block_change, abs(before - after))
        best_unbalanced = 0.0
        for letters in itertools.product(range(1, 4), repeat=2):
            word = Word("L", (tuple(letters),))
            if word.is_balanced():
                continue
            for extra in itertools.product(range(1, 4), repeat=2):
                w2 = Word("L", (tuple(letters), tuple(extra)))
                if w2.is_balanced():
                    continue
                delta = abs(lq.word_trace(sd, w2) - lq.word_trace(remixed, w2))
                best_unbalanced = max(best_unbalanced, delta)
        min_best_unbalanced = min(min_best_unbalanced, best_unbalanced)
    elapsed = time.time() - start
    report(
        7,
        "block sums survive remixing while raw unbalanced words move",
        worst_block_change < 1e-8 and min_best_unbalanced > 1e-3,
        elapsed,
        f"max block drift {worst_block_change:.2e}, "
        f"min top unbalanced move {min_best_unbalanced:.2e}",
    )


def test_criterion_8_trivial_spectra():
    start = time.time()
    mixed = lq.validate_density(np.eye(4, dtype=complex) / 4, 2)
    js = lq.power_traces(mixed)
    ok = bool(np.all(np.abs(js - 4.0 ** (1 - np.arange(1, 5))) <= 1e-12))
    for seed in range(3):
        pure = lq.random_density(2, 1, seed=17_000 + seed)
        ok = ok and bool(np.all(np.abs(lq.power_traces(pure) - 1.0) <= 1e-12))
    elapsed = time.time() - start
    report(
        8,
        "uniform and rank-one spectra give closed-form power traces",
        ok,
        elapsed,
        "",
    )
